//! Far-field intensity as envelope × grating function.
//!
//! Dropping the `k²d²` phase terms of the superposition leaves
//!
//! ```text
//! I(x, z) = I₀(x, z) · sin²(Nζ/2) / sin²(ζ/2)
//! ζ(x, z) = x·d·(zλ/4πσ²) / (2σ_z²)
//! I₀(x, z) = exp(−x²/2σ_z²) / σ_z
//! ```
//!
//! with the `A²/N²` prefactor of `I₀` set to one.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fringe::FringeProfile;
use crate::params::ScenarioParams;

/// Half-width in `ζ` around each `2πk` inside which the grating function
/// takes its limit value `N²`.
pub const SINGULARITY_FILL: f64 = 1e-6;

/// Relative height separating principal from subsidiary maxima.
pub const PRINCIPAL_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FarFieldPoint {
    pub x: f64,
    pub z: f64,
    pub zeta: f64,
    pub envelope: f64,
    pub intensity: f64,
}

pub fn zeta(params: &ScenarioParams, x: f64, z: f64) -> f64 {
    let sz = params.width_at(z);
    x * params.slit_pitch() * (params.spreading_rate() * z) / (2.0 * sz * sz)
}

pub fn envelope(params: &ScenarioParams, x: f64, z: f64) -> f64 {
    let sz = params.width_at(z);
    (-x * x / (2.0 * sz * sz)).exp() / sz
}

/// `sin²(Nζ/2)/sin²(ζ/2)`, equal to `N²` within [`SINGULARITY_FILL`] of
/// every multiple of `2π`.
pub fn grating_factor(slit_count: usize, zeta: f64) -> f64 {
    let n = slit_count as f64;
    let offset = zeta - (zeta / TAU).round() * TAU;
    if offset.abs() < SINGULARITY_FILL {
        return n * n;
    }
    let num = (n * zeta / 2.0).sin();
    let den = (zeta / 2.0).sin();
    (num * num) / (den * den)
}

pub fn intensity(params: &ScenarioParams, x: f64, z: f64) -> f64 {
    far_field_point(params, x, z).intensity
}

pub fn far_field_point(params: &ScenarioParams, x: f64, z: f64) -> FarFieldPoint {
    let zeta = zeta(params, x, z);
    let envelope = envelope(params, x, z);
    FarFieldPoint {
        x,
        z,
        zeta,
        envelope,
        intensity: envelope * grating_factor(params.slit_count(), zeta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MaximumKind {
    Principal,
    Subsidiary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub kind: MaximumKind,
}

/// Interior local maxima of a profile, classified principal when at least
/// half the profile's global maximum.
///
/// A sample counts as a maximum when it rises strictly above its left
/// neighbour and is not exceeded by its right one; flat tops report their
/// leftmost sample and uniform runs report nothing.
pub fn locate_maxima(profile: &FringeProfile) -> Result<Vec<Maximum>> {
    locate_maxima_in(&profile.xs, &profile.values)
}

pub fn locate_maxima_in(xs: &[f64], values: &[f64]) -> Result<Vec<Maximum>> {
    if values.len() < 3 || xs.len() != values.len() {
        return Err(Error::EmptyProfile(values.len().min(xs.len())));
    }
    let global = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < values.len() {
        let v = values[i];
        if v > values[i - 1] {
            // walk across a plateau
            let mut j = i;
            while j + 1 < values.len() && values[j + 1] == v {
                j += 1;
            }
            if j + 1 < values.len() && values[j + 1] < v {
                let kind = if v >= PRINCIPAL_THRESHOLD * global {
                    MaximumKind::Principal
                } else {
                    MaximumKind::Subsidiary
                };
                out.push(Maximum { x: xs[i], value: v, kind });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(out)
}

/// Least-squares scale `s` minimising `‖reference − s·model‖₂` and the
/// resulting relative residual `‖reference − s·model‖₂ / ‖reference‖₂`.
pub fn scale_fit(reference: &[f64], model: &[f64]) -> (f64, f64) {
    assert_eq!(reference.len(), model.len());
    let dot: f64 = reference.iter().zip(model).map(|(r, m)| r * m).sum();
    let mm: f64 = model.iter().map(|m| m * m).sum();
    let rr: f64 = reference.iter().map(|r| r * r).sum();
    let s = if mm > 0.0 { dot / mm } else { 0.0 };
    let res: f64 = reference
        .iter()
        .zip(model)
        .map(|(r, m)| (r - s * m).powi(2))
        .sum();
    let rel = if rr > 0.0 { (res / rr).sqrt() } else { res.sqrt() };
    (s, rel)
}
