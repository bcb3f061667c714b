//! Closed-form Gaussian packets and their N-slit superposition.
//!
//! A slit centred at `x₀` produces, at distance `z` behind the grating,
//!
//! ```text
//! ψ(x, z) = D(z)^(-1/2) · exp(−(x − x₀)² / (4σ²·D(z))),   D(z) = 1 + i·z·λ/(4πσ²)
//! ```
//!
//! The global amplitude, the constant phase and the plane-wave carrier are
//! common to every slit and are dropped, so a lone packet has unit peak at
//! `z = 0` and densities are in arbitrary units.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::ScenarioParams;
use crate::sum::{sum_complex, ComplexSum, COMPENSATED_FROM};

pub type ComplexAmplitude = Complex64;

/// Squared-modulus threshold below which a point is treated as a node.
pub const NODE_EPS: f64 = 1e-30;

/// Exponents below this underflow to zero in `exp`.
const UNDERFLOW_EXPONENT: f64 = -745.2;

/// Complex spreading `σ_τ = σ·D(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSpreading(Complex64);

impl ComplexSpreading {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// `|σ_τ| = σ_z`, the instantaneous Gaussian width.
    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }
}

pub fn spreading(params: &ScenarioParams, z: f64) -> ComplexSpreading {
    let sigma = params.sigma();
    ComplexSpreading(Complex64::new(sigma, sigma * params.spreading_rate() * z))
}

/// Per-plane constants of every packet at a fixed `z`.
#[derive(Debug, Clone, Copy)]
struct PlaneKernel {
    inv_sqrt_d: Complex64,
    /// `−1/(4σ²D)`
    coef: Complex64,
}

impl PlaneKernel {
    #[inline]
    fn new(params: &ScenarioParams, z: f64) -> Self {
        let d = Complex64::new(1.0, params.spreading_rate() * z);
        let s2 = params.sigma() * params.sigma();
        PlaneKernel {
            inv_sqrt_d: d.sqrt().inv(),
            coef: -(d * (4.0 * s2)).inv(),
        }
    }

    /// `exp(−(x−x₀)²/(4σ²D))` without the `D^(-1/2)` prefactor.
    #[inline]
    fn gaussian(&self, offset: f64) -> Complex64 {
        guarded_exp(self.coef * (offset * offset))
    }

    /// Splits `Σₙ exp(c·(x−xₙ)²)` around the nearest slit `m` as
    /// `exp(c·u²)·Σₙ exp(c·vₙ·(2u+vₙ))` with `u = x − x_m`, `vₙ = x_m − xₙ`.
    ///
    /// Far from the grating the raw exponents carry phases of order
    /// `|c|·x²`, whose rounding swamps the interference between slits; the
    /// inner exponents stay of order `|c|·d·|u|`. Since `|x − xₙ| ≥ |u|`
    /// every inner term has modulus at most one.
    #[inline]
    fn anchored(&self, params: &ScenarioParams, x: f64) -> Anchored {
        let n = params.slit_count();
        let centre = (n as f64 - 1.0) / 2.0;
        let m = (x / params.slit_pitch() + centre).round().clamp(0.0, (n - 1) as f64);
        let u = x - params.slit_center(m as usize);
        Anchored { common: self.coef * (u * u), u, m, pitch: params.slit_pitch() }
    }
}

struct Anchored {
    /// Exponent of the shared factor.
    common: Complex64,
    u: f64,
    m: f64,
    pitch: f64,
}

impl Anchored {
    /// `(exp(c·vᵢ·(2u+vᵢ)), x − xᵢ)` for slit `i`.
    #[inline]
    fn term(&self, k: &PlaneKernel, i: usize) -> (Complex64, f64) {
        let v = (self.m - i as f64) * self.pitch;
        (guarded_exp(k.coef * (v * (2.0 * self.u + v))), self.u + v)
    }

    fn underflows(&self) -> bool {
        self.common.re < UNDERFLOW_EXPONENT
    }
}

#[inline]
fn guarded_exp(arg: Complex64) -> Complex64 {
    if arg.re < UNDERFLOW_EXPONENT {
        Complex64::new(0.0, 0.0)
    } else {
        arg.exp()
    }
}

/// Single-slit packet for slit `slit_index`.
///
/// # Panics
/// If `slit_index >= slit_count`.
pub fn packet(params: &ScenarioParams, slit_index: usize, x: f64, z: f64) -> ComplexAmplitude {
    assert!(
        slit_index < params.slit_count(),
        "slit index {slit_index} out of range for {} slits",
        params.slit_count()
    );
    let k = PlaneKernel::new(params, z);
    k.inv_sqrt_d * k.gaussian(x - params.slit_center(slit_index))
}

/// `Ψ(x, z) = (1/N)·Σₙ ψₙ(x, z)`, summed in slit order.
pub fn superpose(params: &ScenarioParams, x: f64, z: f64) -> ComplexAmplitude {
    let k = PlaneKernel::new(params, z);
    superpose_with(params, &k, x)
}

#[inline]
fn superpose_with(params: &ScenarioParams, k: &PlaneKernel, x: f64) -> Complex64 {
    let n = params.slit_count();
    let a = k.anchored(params, x);
    if a.underflows() {
        return Complex64::new(0.0, 0.0);
    }
    let s = sum_complex(n, (0..n).map(|i| a.term(k, i).0));
    a.common.exp() * s * k.inv_sqrt_d / n as f64
}

/// Probability density `|Ψ|²`.
pub fn density(params: &ScenarioParams, x: f64, z: f64) -> f64 {
    superpose(params, x, z).norm_sqr()
}

/// Analytic `∂ₓΨ / Ψ`.
///
/// Fails with [`Error::NodeSingularity`] exactly when `density(x, z) < NODE_EPS`.
pub fn gradient_log(params: &ScenarioParams, x: f64, z: f64) -> Result<ComplexAmplitude> {
    gradient_log_with_threshold(params, x, z, NODE_EPS)
}

/// [`gradient_log`] with a caller-chosen node threshold.
pub fn gradient_log_with_threshold(
    params: &ScenarioParams,
    x: f64,
    z: f64,
    node_eps: f64,
) -> Result<ComplexAmplitude> {
    gradient_and_density(params, x, z, node_eps).map(|(g, _)| g)
}

/// `(∂ₓΨ/Ψ, |Ψ|²)` from one pass over the slits.
pub(crate) fn gradient_and_density(
    params: &ScenarioParams,
    x: f64,
    z: f64,
    node_eps: f64,
) -> Result<(ComplexAmplitude, f64)> {
    let k = PlaneKernel::new(params, z);
    let n = params.slit_count();
    let a = k.anchored(params, x);
    if a.underflows() {
        return Err(Error::NodeSingularity { x, z, density: 0.0 });
    }
    let terms = (0..n).map(|i| {
        let (w, off) = a.term(&k, i);
        (w, w * off)
    });
    let (s0, s1) = if n >= COMPENSATED_FROM {
        let (mut a, mut b) = (ComplexSum::new(), ComplexSum::new());
        for (w, m) in terms {
            a.add(w);
            b.add(m);
        }
        (a.total(), b.total())
    } else {
        terms.fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(a, b), (w, m)| (a + w, b + m))
    };
    let psi = a.common.exp() * s0 * k.inv_sqrt_d / n as f64;
    let rho = psi.norm_sqr();
    if !(rho >= node_eps) || s0 == Complex64::new(0.0, 0.0) {
        return Err(Error::NodeSingularity { x, z, density: rho });
    }
    // Σ wₙ·(−(x−x₀)/(2σ²D)) / Σ wₙ, and −1/(2σ²D) = 2·coef
    Ok((k.coef * 2.0 * s1 / s0, rho))
}

/// Quantum-potential core `−[ρ''/(2ρ) − (ρ'/(2ρ))²]` along `x`, in units
/// of `ħ²/(2m)`, from central differences of the analytic density with
/// step `h`.
pub fn quantum_potential(params: &ScenarioParams, x: f64, z: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParams(format!("stencil step must be > 0, got {h}")));
    }
    let k = PlaneKernel::new(params, z);
    let rho = |xx: f64| superpose_with(params, &k, xx).norm_sqr();
    let (lo, mid, hi) = (rho(x - h), rho(x), rho(x + h));
    for (xx, r) in [(x - h, lo), (x, mid), (x + h, hi)] {
        if !(r >= NODE_EPS) {
            return Err(Error::NodeSingularity { x: xx, z, density: r });
        }
    }
    let d1 = (hi - lo) / (2.0 * h);
    let d2 = (hi - 2.0 * mid + lo) / (h * h);
    let g = d1 / (2.0 * mid);
    Ok(-(d2 / (2.0 * mid) - g * g))
}

/// Uniform sampling lattice over `[x_min, x_max] × [z_min, z_max]`.
///
/// With a single sample along an axis the lattice sits at the minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub nz: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.nx == 0 || self.nz == 0 {
            return bad(format!("grid must be non-empty, got {}x{}", self.nx, self.nz));
        }
        for v in [self.x_min, self.x_max, self.z_min, self.z_max] {
            if !v.is_finite() {
                return bad("grid extents must be finite".into());
            }
        }
        if self.x_max < self.x_min || (self.nx > 1 && self.x_max == self.x_min) {
            return bad(format!("bad x extent [{}, {}]", self.x_min, self.x_max));
        }
        if self.z_max < self.z_min || (self.nz > 1 && self.z_max == self.z_min) {
            return bad(format!("bad z extent [{}, {}]", self.z_min, self.z_max));
        }
        if self.z_min < 0.0 {
            return bad(format!("z_min must be >= 0, got {}", self.z_min));
        }
        Ok(())
    }

    #[inline]
    pub fn x_at(&self, ix: usize) -> f64 {
        axis_at(self.x_min, self.x_max, self.nx, ix)
    }

    #[inline]
    pub fn z_at(&self, iz: usize) -> f64 {
        axis_at(self.z_min, self.z_max, self.nz, iz)
    }

    pub fn dx(&self) -> f64 {
        step(self.x_min, self.x_max, self.nx)
    }

    pub fn dz(&self) -> f64 {
        step(self.z_min, self.z_max, self.nz)
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn step(lo: f64, hi: f64, n: usize) -> f64 {
    if n > 1 {
        (hi - lo) / (n - 1) as f64
    } else {
        0.0
    }
}

#[inline]
fn axis_at(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n <= 1 {
        lo
    } else if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64 / (n - 1) as f64)
    }
}

/// Row-major `[nz × nx]` samples; row 0 is `z_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid<T> {
    pub spec: GridSpec,
    pub samples: Vec<T>,
}

impl<T: Copy> FieldGrid<T> {
    #[inline]
    pub fn get(&self, ix: usize, iz: usize) -> T {
        self.samples[iz * self.spec.nx + ix]
    }

    pub fn row(&self, iz: usize) -> &[T] {
        let nx = self.spec.nx;
        &self.samples[iz * nx..(iz + 1) * nx]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.samples.chunks(self.spec.nx)
    }
}

impl FieldGrid<f64> {
    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }

    /// Divides every sample by the grid maximum (no-op on an all-zero grid).
    pub fn normalize(&mut self) {
        let m = self.max();
        if m > 0.0 {
            self.samples.iter_mut().for_each(|v| *v /= m);
        }
    }
}

fn fill<T, F>(params: &ScenarioParams, spec: GridSpec, eval: F) -> Result<FieldGrid<T>>
where
    T: Copy + Default + Send,
    F: Fn(&ScenarioParams, &PlaneKernel, f64) -> T + Sync,
{
    spec.validate()?;
    let mut samples = vec![T::default(); spec.len()];
    samples
        .par_chunks_mut(spec.nx)
        .enumerate()
        .for_each(|(iz, row)| {
            let k = PlaneKernel::new(params, spec.z_at(iz));
            for (ix, v) in row.iter_mut().enumerate() {
                *v = eval(params, &k, spec.x_at(ix));
            }
        });
    Ok(FieldGrid { spec, samples })
}

/// Density over a grid; rows are filled in parallel on the current rayon
/// pool and the result does not depend on the number of workers.
pub fn density_grid(params: &ScenarioParams, spec: GridSpec) -> Result<FieldGrid<f64>> {
    fill(params, spec, |p, k, x| superpose_with(p, k, x).norm_sqr())
}

pub fn amplitude_grid(params: &ScenarioParams, spec: GridSpec) -> Result<FieldGrid<ComplexAmplitude>> {
    fill(params, spec, superpose_with)
}

/// Density along `x` at a single plane.
pub fn density_row(params: &ScenarioParams, z: f64, xs: &[f64]) -> Vec<f64> {
    let k = PlaneKernel::new(params, z);
    xs.par_iter().map(|&x| superpose_with(params, &k, x).norm_sqr()).collect()
}
