//! Density cross-sections at fixed `z`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::farfield::{locate_maxima, Maximum};
use crate::params::ScenarioParams;
use crate::wavefield::{density_row, FieldGrid, GridSpec};

/// Max-normalized density along `x` at one plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringeProfile {
    pub z: f64,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl FringeProfile {
    /// Normalizes `values` by their maximum. `xs` must be strictly
    /// increasing and `values` non-negative.
    pub fn new(z: f64, xs: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::InvalidParams(format!(
                "profile has {} positions but {} values",
                xs.len(),
                values.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParams("profile positions must be strictly increasing".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParams("profile values must be finite and >= 0".into()));
        }
        let max = values.iter().copied().fold(0.0, f64::max);
        if max > 0.0 {
            values.iter_mut().for_each(|v| *v /= max);
        }
        Ok(FringeProfile { z, xs, values })
    }

    pub fn maxima(&self) -> Result<Vec<Maximum>> {
        locate_maxima(self)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Samples the analytic density on `nx` points of `[x_min, x_max]` at `z`.
///
/// `z_range` is the simulated range the plane must fall in.
pub fn extract_fringe(
    params: &ScenarioParams,
    z: f64,
    z_range: (f64, f64),
    x_min: f64,
    x_max: f64,
    nx: usize,
) -> Result<FringeProfile> {
    check_plane(z, z_range.0, z_range.1)?;
    if nx < 2 || !(x_max > x_min) {
        return Err(Error::InvalidParams(format!(
            "fringe needs nx >= 2 over a non-empty span, got {nx} over [{x_min}, {x_max}]"
        )));
    }
    let axis = GridSpec { x_min, x_max, nx, z_min: z, z_max: z, nz: 1 };
    let xs: Vec<f64> = (0..nx).map(|i| axis.x_at(i)).collect();
    let values = density_row(params, z, &xs);
    FringeProfile::new(z, xs, values)
}

/// Cross-section of a stored density grid, linearly interpolated between
/// the two rows bracketing `z`.
pub fn extract_fringe_from_grid(grid: &FieldGrid<f64>, z: f64) -> Result<FringeProfile> {
    let spec = grid.spec;
    check_plane(z, spec.z_min, spec.z_max)?;
    let xs: Vec<f64> = (0..spec.nx).map(|i| spec.x_at(i)).collect();
    let values = if spec.nz == 1 {
        grid.row(0).to_vec()
    } else {
        let pos = (z - spec.z_min) / spec.dz();
        let lo = (pos.floor() as usize).min(spec.nz - 2);
        let t = (pos - lo as f64).clamp(0.0, 1.0);
        grid.row(lo)
            .iter()
            .zip(grid.row(lo + 1))
            .map(|(a, b)| a + (b - a) * t)
            .collect()
    };
    FringeProfile::new(z, xs, values)
}

fn check_plane(z: f64, z_min: f64, z_max: f64) -> Result<()> {
    if z.is_finite() && z >= z_min && z <= z_max {
        Ok(())
    } else {
        Err(Error::PlaneOutOfRange { z, z_min, z_max })
    }
}
