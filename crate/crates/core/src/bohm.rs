//! Bohmian trajectories `x(z)` from the guidance field.
//!
//! With `z = v_z·t` and `ħ/(m·v_z) = λ/2π` the guidance equation becomes
//! the scalar ODE
//!
//! ```text
//! dx/dz = (λ/2π)·Im(∂ₓΨ/Ψ)
//! ```
//!
//! integrated with the Dormand–Prince 5(4) pair. Steps are halved while the
//! embedded error exceeds `rel_tol·max(σ, |x|)` or while a stage lands on a
//! wave-function node.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ScenarioParams;
use crate::wavefield::{gradient_and_density, NODE_EPS};

/// `dx/dz` at `(x, z)`.
pub fn velocity_slope(params: &ScenarioParams, x: f64, z: f64) -> Result<f64> {
    slope(params, x, z, NODE_EPS).map(|(v, _)| v)
}

/// Slope and density at `(x, z)`.
#[inline]
fn slope(params: &ScenarioParams, x: f64, z: f64, node_eps: f64) -> Result<(f64, f64)> {
    let (g, rho) = gradient_and_density(params, x, z, node_eps)?;
    Ok((params.wavelength() / TAU * g.im, rho))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dz_init: f64,
    pub dz_min: f64,
    pub dz_max: f64,
    pub rel_tol: f64,
    /// Squared-modulus threshold treated as a node.
    pub node_eps: f64,
    /// Trajectories with `|x|` beyond this are stopped as out of bounds.
    pub x_limit: f64,
    /// Accepted-step budget; exhausting it also stops as out of bounds.
    pub max_steps: usize,
}

impl IntegratorConfig {
    /// Step sizes scaled to the packet spreading length `4πσ²/λ` and the
    /// integration span.
    pub fn for_span(params: &ScenarioParams, z_start: f64, z_end: f64) -> Self {
        let span = (z_end - z_start).abs().max(f64::MIN_POSITIVE);
        let spread_len = 1.0 / params.spreading_rate();
        let dz_init = (1e-3 * spread_len).min(1e-3 * span);
        IntegratorConfig {
            dz_init,
            dz_min: dz_init * 1e-6,
            dz_max: (span / 200.0).max(dz_init),
            rel_tol: 1e-8,
            node_eps: NODE_EPS,
            x_limit: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.dz_min > 0.0
            && self.dz_min <= self.dz_init
            && self.dz_init <= self.dz_max
            && self.dz_max.is_finite();
        if !ok {
            return Err(Error::InvalidConfig(format!(
                "need 0 < dz_min <= dz_init <= dz_max, got {} / {} / {}",
                self.dz_min, self.dz_init, self.dz_max
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.node_eps >= 0.0 && self.node_eps.is_finite()) {
            return Err(Error::InvalidConfig(format!("node_eps must be >= 0, got {}", self.node_eps)));
        }
        if !(self.x_limit > 0.0) || self.max_steps == 0 {
            return Err(Error::InvalidConfig("x_limit and max_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryStatus {
    Completed,
    AbortedNode,
    AbortedBounds,
}

impl TrajectoryStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrajectoryStatus::Completed => "completed",
            TrajectoryStatus::AbortedNode => "aborted_node",
            TrajectoryStatus::AbortedBounds => "aborted_bounds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub min_step: f64,
    pub max_step: f64,
    /// Linearized global error of the final `x`: every local error carried
    /// to the end point by the flow Jacobian `∂x/∂x_k = ρ(x_k, z_k)/ρ(x, z)`,
    /// which follows from probability conservation along trajectories.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub launch_x: f64,
    pub status: TrajectoryStatus,
    /// `[x, z]` pairs with `z` strictly increasing.
    pub points: Vec<[f64; 2]>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn is_completed(&self) -> bool {
        self.status == TrajectoryStatus::Completed
    }

    pub fn last(&self) -> [f64; 2] {
        *self.points.last().expect("trajectory has a launch point")
    }

    /// `x` at plane `z`: exact at recorded samples, linear in between,
    /// `None` outside the integrated range.
    pub fn position_at(&self, z: f64) -> Option<f64> {
        let idx = self.points.partition_point(|p| p[1] < z);
        let p = self.points.get(idx)?;
        if p[1] == z {
            return Some(p[0]);
        }
        if idx == 0 {
            return None;
        }
        let q = self.points[idx - 1];
        let t = (z - q[1]) / (p[1] - q[1]);
        Some(q[0] + t * (p[0] - q[0]))
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct StepResult {
    x_new: f64,
    slope_new: f64,
    density_new: f64,
    error: f64,
}

fn dopri_step(
    params: &ScenarioParams,
    node_eps: f64,
    x: f64,
    z: f64,
    h: f64,
    k1: f64,
) -> Result<StepResult> {
    let mut k = [0.0; 7];
    k[0] = k1;
    let mut rho = 0.0;
    for s in 1..7 {
        let incr: f64 = (0..s).map(|j| A[s][j] * k[j]).sum();
        (k[s], rho) = slope(params, x + h * incr, z + C[s] * h, node_eps)?;
    }
    let x_new = x + h * (0..7).map(|j| B5[j] * k[j]).sum::<f64>();
    let error = (h * (0..7).map(|j| (B5[j] - B4[j]) * k[j]).sum::<f64>()).abs();
    // the last stage sits on the new point (FSAL)
    Ok(StepResult { x_new, slope_new: k[6], density_new: rho, error })
}

/// Integrates from `(launch_x, z_start)` to `z_end`, landing exactly on
/// every plane of `sample_planes` that lies inside the interval.
///
/// Integration failures are reported through [`Trajectory::status`]; only
/// an invalid configuration or interval is an error.
pub fn integrate_with_planes(
    params: &ScenarioParams,
    cfg: &IntegratorConfig,
    launch_x: f64,
    z_start: f64,
    z_end: f64,
    sample_planes: &[f64],
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(z_start < z_end) || !z_start.is_finite() || !z_end.is_finite() || z_start < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "need 0 <= z_start < z_end, got [{z_start}, {z_end}]"
        )));
    }
    let mut planes: Vec<f64> = sample_planes
        .iter()
        .copied()
        .filter(|&p| p > z_start && p < z_end)
        .collect();
    planes.push(z_end);
    planes.sort_by(f64::total_cmp);
    planes.dedup();

    let mut traj = Trajectory {
        launch_x,
        status: TrajectoryStatus::Completed,
        points: vec![[launch_x, z_start]],
        stats: StepStats { min_step: f64::INFINITY, ..Default::default() },
    };

    let (mut k1, mut rho) = match slope(params, launch_x, z_start, cfg.node_eps) {
        Ok(v) => v,
        Err(_) => {
            traj.status = TrajectoryStatus::AbortedNode;
            traj.stats.min_step = 0.0;
            return Ok(traj);
        }
    };

    let sigma = params.sigma();
    let (mut x, mut z) = (launch_x, z_start);
    let mut dz = cfg.dz_init;
    // Σ local error · density where it was made
    let mut transported = 0.0;
    let mut next_plane = 0;

    while z < z_end {
        let target = planes[next_plane];
        let gap = target - z;
        let (h, hits) = if dz >= gap { (gap, true) } else { (dz, false) };

        let step = match dopri_step(params, cfg.node_eps, x, z, h, k1) {
            Ok(s) => s,
            Err(_) => {
                if h <= cfg.dz_min {
                    traj.status = TrajectoryStatus::AbortedNode;
                    break;
                }
                traj.stats.rejected += 1;
                dz = (h / 2.0).max(cfg.dz_min);
                continue;
            }
        };

        let tol = cfg.rel_tol * sigma.max(x.abs());
        if step.error > tol && h > cfg.dz_min {
            traj.stats.rejected += 1;
            dz = (h / 2.0).max(cfg.dz_min);
            continue;
        }

        z = if hits { target } else { z + h };
        if hits {
            next_plane += 1;
        }
        x = step.x_new;
        k1 = step.slope_new;
        rho = step.density_new;
        transported += step.error * rho;
        traj.points.push([x, z]);
        let st = &mut traj.stats;
        st.accepted += 1;
        st.min_step = st.min_step.min(h);
        st.max_step = st.max_step.max(h);

        if !x.is_finite() || x.abs() > cfg.x_limit || st.accepted >= cfg.max_steps && z < z_end {
            traj.status = TrajectoryStatus::AbortedBounds;
            break;
        }

        let factor = if step.error == 0.0 {
            5.0
        } else {
            (0.9 * (tol / step.error).powf(0.2)).clamp(0.2, 5.0)
        };
        let grown = h * factor;
        // a step shortened to land on a plane should not shrink the next one
        dz = if hits { grown.max(dz) } else { grown };
        dz = dz.clamp(cfg.dz_min, cfg.dz_max);
    }

    if traj.stats.accepted == 0 {
        traj.stats.min_step = 0.0;
    }
    traj.stats.error_estimate = transported / rho;
    if traj.status == TrajectoryStatus::Completed && z < z_end {
        traj.status = TrajectoryStatus::AbortedBounds;
    }
    Ok(traj)
}

/// [`integrate_with_planes`] without forced sample planes.
pub fn integrate(
    params: &ScenarioParams,
    cfg: &IntegratorConfig,
    launch_x: f64,
    z_start: f64,
    z_end: f64,
) -> Result<Trajectory> {
    integrate_with_planes(params, cfg, launch_x, z_start, z_end, &[])
}

/// Integrates every launch in parallel; output order follows `launches`.
pub fn integrate_batch(
    params: &ScenarioParams,
    cfg: &IntegratorConfig,
    launches: &[f64],
    z_start: f64,
    z_end: f64,
    sample_planes: &[f64],
) -> Result<Vec<Trajectory>> {
    cfg.validate()?;
    launches
        .par_iter()
        .map(|&x| integrate_with_planes(params, cfg, x, z_start, z_end, sample_planes))
        .collect()
}

/// `per_slit` equally spaced launches over `[x₀ − kσ, x₀ + kσ]` for every
/// slit, sorted ascending without duplicates. A single launch per slit sits
/// on the slit centre.
pub fn launch_grid(params: &ScenarioParams, per_slit: usize, half_span_sigmas: f64) -> Vec<f64> {
    launch_grid_for(params, 0..params.slit_count(), per_slit, half_span_sigmas)
}

/// [`launch_grid`] restricted to the given slit indices.
pub fn launch_grid_for(
    params: &ScenarioParams,
    slits: impl IntoIterator<Item = usize>,
    per_slit: usize,
    half_span_sigmas: f64,
) -> Vec<f64> {
    let half = half_span_sigmas * params.sigma();
    let mut out = Vec::new();
    for n in slits {
        let x0 = params.slit_center(n);
        if per_slit <= 1 {
            out.push(x0);
            continue;
        }
        let step = 2.0 * half / (per_slit - 1) as f64;
        out.extend((0..per_slit).map(|i| x0 - half + step * i as f64));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}
