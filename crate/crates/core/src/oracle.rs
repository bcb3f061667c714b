//! Brute-force cross-checks for the closed forms in [`crate::wavefield`].
//!
//! [`convolve_kernel`] integrates the free-particle kernel across a Gaussian
//! slit numerically, with the source already taken to infinity (plane-wave
//! illumination):
//!
//! ```text
//! ψ(x₁, z) = (iλz)^(-1/2) ∫ exp(iπ(x₁ − x₀ − ξ)²/(λz)) · exp(−ξ²/2b²) dξ,   b = σ√2
//! ```
//!
//! which must reproduce [`crate::wavefield::packet`] up to one global
//! constant. [`fd_gradient`] is the central-difference counterpart of
//! [`crate::wavefield::gradient_log`].

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ScenarioParams;
use crate::wavefield::{superpose, ComplexAmplitude, NODE_EPS};

/// Relative change on doubling the point count above which a quadrature is
/// reported unconverged.
pub const CONVERGENCE_TOL: f64 = 1e-6;

/// Nodes per Gauss–Legendre panel.
const GL_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Trapezoid,
    GaussLegendre,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Integration runs over `ξ ∈ [−half_range, half_range]`.
    pub half_range: f64,
    pub n_points: usize,
    pub scheme: Scheme,
}

impl QuadratureSpec {
    /// Covers `±8b` of the slit form factor.
    pub fn covering(params: &ScenarioParams, n_points: usize, scheme: Scheme) -> Self {
        QuadratureSpec {
            half_range: 8.0 * form_factor_width(params),
            n_points,
            scheme,
        }
    }

    fn validate(&self, params: &ScenarioParams) -> Result<()> {
        let b = form_factor_width(params);
        if !(self.half_range >= 6.0 * b) {
            return Err(Error::InvalidParams(format!(
                "quadrature half_range {} must cover 6b = {}",
                self.half_range,
                6.0 * b
            )));
        }
        if self.n_points < 1000 {
            return Err(Error::InvalidParams(format!(
                "oscillatory quadrature needs n_points >= 1000, got {}",
                self.n_points
            )));
        }
        Ok(())
    }
}

/// `b = σ√2`, the width parameter of the form factor.
pub fn form_factor_width(params: &ScenarioParams) -> f64 {
    params.sigma() * SQRT_2
}

/// Gaussian slit transmission `G(ξ) = exp(−ξ²/2b²)`.
pub fn form_factor(b: f64, xi: f64) -> f64 {
    (-xi * xi / (2.0 * b * b)).exp()
}

/// Nodes and weights of the `GL_ORDER`-point rule on `[−1, 1]`.
fn gauss_legendre_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Newton iteration on `P_n` from Chebyshev-like initial guesses.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Integrates `f` over `[a, b]` with about `n_points` evaluations.
pub fn integrate<F>(f: F, a: f64, b: f64, n_points: usize, scheme: Scheme) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    match scheme {
        Scheme::Trapezoid => {
            let n = n_points.max(2);
            let h = (b - a) / (n - 1) as f64;
            let mut acc = (f(a) + f(b)) * 0.5;
            for i in 1..n - 1 {
                acc += f(a + h * i as f64);
            }
            acc * h
        }
        Scheme::GaussLegendre => {
            let panels = n_points.div_ceil(GL_ORDER).max(1);
            let width = (b - a) / panels as f64;
            let rule = gauss_legendre_rule();
            let mut total = Complex64::new(0.0, 0.0);
            for p in 0..panels {
                let mid = a + width * (p as f64 + 0.5);
                let half = width / 2.0;
                let mut acc = Complex64::new(0.0, 0.0);
                for &(t, w) in rule {
                    acc += f(mid + half * t) * w;
                }
                total += acc * half;
            }
            total
        }
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, a: f64, b: f64, n_points: usize, scheme: Scheme) -> f64
where
    F: Fn(f64) -> f64,
{
    integrate(|x| Complex64::new(f(x), 0.0), a, b, n_points, scheme).re
}

/// Numerical slit convolution for slit `slit_index`, evaluated at `n_points`
/// and `2·n_points`; returns the finer value.
pub fn convolve_kernel(
    params: &ScenarioParams,
    spec: &QuadratureSpec,
    slit_index: usize,
    x1: f64,
    z: f64,
) -> Result<ComplexAmplitude> {
    spec.validate(params)?;
    if !(z > 0.0) {
        return Err(Error::InvalidParams(format!("convolution needs z > 0, got {z}")));
    }
    if slit_index >= params.slit_count() {
        return Err(Error::InvalidParams(format!("slit index {slit_index} out of range")));
    }
    let offset = x1 - params.slit_center(slit_index);
    let b = form_factor_width(params);
    let lz = params.wavelength() * z;
    let alpha = PI / lz;
    let integrand = |xi: f64| {
        let u = offset - xi;
        Complex64::new(0.0, alpha * u * u).exp() * form_factor(b, xi)
    };
    let norm = Complex64::new(0.0, lz).sqrt().inv();
    let (lo, hi) = (-spec.half_range, spec.half_range);
    let coarse = integrate(integrand, lo, hi, spec.n_points, spec.scheme) * norm;
    let fine = integrate(integrand, lo, hi, 2 * spec.n_points, spec.scheme) * norm;
    let change = (fine - coarse).norm() / fine.norm();
    if !(change <= CONVERGENCE_TOL) {
        return Err(Error::QuadratureUnconverged { n_points: 2 * spec.n_points, change });
    }
    Ok(fine)
}

/// `(Ψ(x+h) − Ψ(x−h)) / (2h·Ψ(x))`.
pub fn fd_gradient(params: &ScenarioParams, x: f64, z: f64, h: f64) -> Result<ComplexAmplitude> {
    if !(h > 0.0) {
        return Err(Error::InvalidParams(format!("difference step must be > 0, got {h}")));
    }
    let psi = superpose(params, x, z);
    let rho = psi.norm_sqr();
    if !(rho >= NODE_EPS) {
        return Err(Error::NodeSingularity { x, z, density: rho });
    }
    let diff = superpose(params, x + h, z) - superpose(params, x - h, z);
    Ok(diff / (psi * (2.0 * h)))
}
