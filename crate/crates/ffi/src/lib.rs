//! C ABI over the `slitwave` engine.
//!
//! Parameter sets and trajectories cross the boundary as opaque handles.
//! Every fallible call returns a [`SlitwaveStatus`] and writes results
//! through caller-provided pointers, which are left untouched on failure.
//! Handles must be released with their matching `*_free` function.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use slitwave::bohm::{integrate, velocity_slope, IntegratorConfig, Trajectory, TrajectoryStatus};
use slitwave::farfield::intensity;
use slitwave::wavefield::{density, density_grid, gradient_log, quantum_potential, superpose, GridSpec};
use slitwave::{Error, ScenarioParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitwaveStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    NodeSingularity = 3,
    QuadratureUnconverged = 4,
    EmptyProfile = 5,
    PlaneOutOfRange = 6,
    InvalidConfig = 7,
    Config = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitwaveTrajectoryStatus {
    Completed = 0,
    AbortedNode = 1,
    AbortedBounds = 2,
}

/// Validated scenario parameters.
pub struct SlitwaveEngine {
    params: ScenarioParams,
}

/// One integrated Bohmian trajectory.
pub struct SlitwaveTrajectory {
    inner: Trajectory,
}

impl From<&Error> for SlitwaveStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParams(_) => SlitwaveStatus::InvalidParams,
            Error::NodeSingularity { .. } => SlitwaveStatus::NodeSingularity,
            Error::QuadratureUnconverged { .. } => SlitwaveStatus::QuadratureUnconverged,
            Error::EmptyProfile(_) => SlitwaveStatus::EmptyProfile,
            Error::PlaneOutOfRange { .. } => SlitwaveStatus::PlaneOutOfRange,
            Error::InvalidConfig(_) => SlitwaveStatus::InvalidConfig,
            Error::Config(_) => SlitwaveStatus::Config,
            Error::Io(_) => SlitwaveStatus::Io,
        }
    }
}

fn guard<F: FnOnce() -> Result<(), SlitwaveStatus>>(f: F) -> SlitwaveStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlitwaveStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => SlitwaveStatus::Panic,
    }
}

fn status(e: Error) -> SlitwaveStatus {
    SlitwaveStatus::from(&e)
}

unsafe fn engine<'a>(e: *const SlitwaveEngine) -> Result<&'a ScenarioParams, SlitwaveStatus> {
    e.as_ref().map(|e| &e.params).ok_or(SlitwaveStatus::NullPointer)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), SlitwaveStatus> {
    if out.is_null() {
        return Err(SlitwaveStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn slitwave_status_message(status: SlitwaveStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SlitwaveStatus::Ok => b"ok\0",
        SlitwaveStatus::NullPointer => b"null pointer argument\0",
        SlitwaveStatus::InvalidParams => b"invalid parameters\0",
        SlitwaveStatus::NodeSingularity => b"density below node threshold\0",
        SlitwaveStatus::QuadratureUnconverged => b"quadrature did not converge\0",
        SlitwaveStatus::EmptyProfile => b"profile too short\0",
        SlitwaveStatus::PlaneOutOfRange => b"plane outside simulated range\0",
        SlitwaveStatus::InvalidConfig => b"invalid integrator configuration\0",
        SlitwaveStatus::Config => b"configuration error\0",
        SlitwaveStatus::Io => b"i/o error\0",
        SlitwaveStatus::BufferTooSmall => b"output buffer too small\0",
        SlitwaveStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Creates an engine. Pass `sigma <= 0` for the default `a/(2√2)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_engine_new(
    wavelength: f64,
    slit_count: usize,
    slit_pitch: f64,
    slit_width: f64,
    sigma: f64,
    out: *mut *mut SlitwaveEngine,
) -> SlitwaveStatus {
    guard(|| {
        if out.is_null() {
            return Err(SlitwaveStatus::NullPointer);
        }
        let params = if sigma > 0.0 {
            ScenarioParams::with_sigma(wavelength, slit_count, slit_pitch, slit_width, sigma)
        } else {
            ScenarioParams::new(wavelength, slit_count, slit_pitch, slit_width)
        }
        .map_err(status)?;
        put(out, Box::into_raw(Box::new(SlitwaveEngine { params })))
    })
}

/// # Safety
/// `engine` must come from [`slitwave_engine_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn slitwave_engine_free(engine: *mut SlitwaveEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// # Safety
/// Pointers must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_sigma(engine: *const SlitwaveEngine, out: *mut f64) -> SlitwaveStatus {
    guard(|| put(out, self::engine(engine)?.sigma()))
}

/// # Safety
/// Pointers must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_talbot_length(engine: *const SlitwaveEngine, out: *mut f64) -> SlitwaveStatus {
    guard(|| put(out, self::engine(engine)?.talbot_length()))
}

/// # Safety
/// Pointers must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_superpose(
    engine: *const SlitwaveEngine,
    x: f64,
    z: f64,
    re: *mut f64,
    im: *mut f64,
) -> SlitwaveStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(SlitwaveStatus::NullPointer);
        }
        let psi = superpose(self::engine(engine)?, x, z);
        put(re, psi.re)?;
        put(im, psi.im)
    })
}

/// # Safety
/// Pointers must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_density(engine: *const SlitwaveEngine, x: f64, z: f64, out: *mut f64) -> SlitwaveStatus {
    guard(|| put(out, density(self::engine(engine)?, x, z)))
}

/// `∂ₓΨ/Ψ` as real and imaginary parts.
///
/// # Safety
/// Pointers must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_gradient_log(
    engine: *const SlitwaveEngine,
    x: f64,
    z: f64,
    re: *mut f64,
    im: *mut f64,
) -> SlitwaveStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(SlitwaveStatus::NullPointer);
        }
        let g = gradient_log(self::engine(engine)?, x, z).map_err(status)?;
        put(re, g.re)?;
        put(im, g.im)
    })
}

/// # Safety
/// Pointers must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_quantum_potential(
    engine: *const SlitwaveEngine,
    x: f64,
    z: f64,
    h: f64,
    out: *mut f64,
) -> SlitwaveStatus {
    guard(|| put(out, quantum_potential(self::engine(engine)?, x, z, h).map_err(status)?))
}

/// Trajectory slope `dx/dz` of the guidance field.
///
/// # Safety
/// Pointers must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_velocity_slope(
    engine: *const SlitwaveEngine,
    x: f64,
    z: f64,
    out: *mut f64,
) -> SlitwaveStatus {
    guard(|| put(out, velocity_slope(self::engine(engine)?, x, z).map_err(status)?))
}

/// Closed-form far-field intensity (envelope times grating factor).
///
/// # Safety
/// Pointers must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_farfield_intensity(
    engine: *const SlitwaveEngine,
    x: f64,
    z: f64,
    out: *mut f64,
) -> SlitwaveStatus {
    guard(|| put(out, intensity(self::engine(engine)?, x, z)))
}

/// Fills `buf` with `nx·nz` un-normalized densities, row-major with
/// row 0 at `z_min`.
///
/// # Safety
/// `buf` must point to `buf_len` writable doubles.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn slitwave_density_grid(
    engine: *const SlitwaveEngine,
    x_min: f64,
    x_max: f64,
    nx: usize,
    z_min: f64,
    z_max: f64,
    nz: usize,
    buf: *mut f64,
    buf_len: usize,
) -> SlitwaveStatus {
    guard(|| {
        let params = self::engine(engine)?;
        if buf.is_null() {
            return Err(SlitwaveStatus::NullPointer);
        }
        let spec = GridSpec { x_min, x_max, nx, z_min, z_max, nz };
        spec.validate().map_err(status)?;
        if buf_len < spec.len() {
            return Err(SlitwaveStatus::BufferTooSmall);
        }
        let grid = density_grid(params, spec).map_err(status)?;
        std::slice::from_raw_parts_mut(buf, grid.samples.len()).copy_from_slice(&grid.samples);
        Ok(())
    })
}

/// Integrates one trajectory. Pass `rel_tol <= 0` for the default.
///
/// # Safety
/// `out` must be valid; `engine` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_integrate(
    engine: *const SlitwaveEngine,
    launch_x: f64,
    z_start: f64,
    z_end: f64,
    rel_tol: f64,
    out: *mut *mut SlitwaveTrajectory,
) -> SlitwaveStatus {
    guard(|| {
        let params = self::engine(engine)?;
        if out.is_null() {
            return Err(SlitwaveStatus::NullPointer);
        }
        let mut cfg = IntegratorConfig::for_span(params, z_start, z_end);
        if rel_tol > 0.0 {
            cfg = cfg.with_rel_tol(rel_tol);
        }
        let inner = integrate(params, &cfg, launch_x, z_start, z_end).map_err(status)?;
        put(out, Box::into_raw(Box::new(SlitwaveTrajectory { inner })))
    })
}

/// # Safety
/// Pointers must be valid; `traj` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_trajectory_status(
    traj: *const SlitwaveTrajectory,
    out: *mut SlitwaveTrajectoryStatus,
) -> SlitwaveStatus {
    guard(|| {
        let t = traj.as_ref().ok_or(SlitwaveStatus::NullPointer)?;
        put(
            out,
            match t.inner.status {
                TrajectoryStatus::Completed => SlitwaveTrajectoryStatus::Completed,
                TrajectoryStatus::AbortedNode => SlitwaveTrajectoryStatus::AbortedNode,
                TrajectoryStatus::AbortedBounds => SlitwaveTrajectoryStatus::AbortedBounds,
            },
        )
    })
}

/// Number of recorded `(x, z)` points.
///
/// # Safety
/// Pointers must be valid; `traj` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn slitwave_trajectory_len(traj: *const SlitwaveTrajectory, out: *mut usize) -> SlitwaveStatus {
    guard(|| {
        let t = traj.as_ref().ok_or(SlitwaveStatus::NullPointer)?;
        put(out, t.inner.points.len())
    })
}

/// Copies the points as interleaved `x, z` pairs; `buf_len` counts doubles.
///
/// # Safety
/// `buf` must point to `buf_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn slitwave_trajectory_points(
    traj: *const SlitwaveTrajectory,
    buf: *mut f64,
    buf_len: usize,
) -> SlitwaveStatus {
    guard(|| {
        let t = traj.as_ref().ok_or(SlitwaveStatus::NullPointer)?;
        if buf.is_null() {
            return Err(SlitwaveStatus::NullPointer);
        }
        let flat = t.inner.points.as_flattened();
        if buf_len < flat.len() {
            return Err(SlitwaveStatus::BufferTooSmall);
        }
        ptr::copy_nonoverlapping(flat.as_ptr(), buf, flat.len());
        Ok(())
    })
}

/// # Safety
/// `traj` must come from [`slitwave_integrate`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn slitwave_trajectory_free(traj: *mut SlitwaveTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}
