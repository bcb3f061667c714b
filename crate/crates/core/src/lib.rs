//! Numerical engine for N-slit matter-wave interference.
//!
//! Each slit of a grating launches a spreading Gaussian wavepacket; the
//! superposition of all packets gives the near-field (Talbot carpet) and
//! far-field densities. Bohmian trajectories follow the guidance field
//! `dx/dz = (λ/2π)·Im(∂ₓΨ/Ψ)` with `z` as the evolution parameter.
//!
//! All lengths are in nanometres. Time never appears: the paraxial
//! substitution `τ = z/v_z` together with `ħ/(m·v_z) = λ/2π` folds every
//! dynamical constant into the wavelength.
//!
//! Modules:
//! - [`wavefield`]: closed-form packets, superposition, density, gradients,
//!   quantum potential, density grids.
//! - [`farfield`]: grating-function intensity and maxima classification.
//! - [`bohm`]: adaptive trajectory integration.
//! - [`oracle`]: brute-force quadrature of the slit convolution and finite
//!   differences used to cross-check the closed forms.
//! - [`fringe`], [`render`], [`scenario`], [`run`]: the batch front end.

// `!(a > b)` style guards deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bohm;
pub mod error;
pub mod farfield;
pub mod fringe;
pub mod oracle;
pub mod params;
pub mod render;
pub mod run;
pub mod scenario;
pub mod sum;
pub mod wavefield;

pub use error::{Error, Result};
pub use params::{talbot_length, ScenarioParams};
pub use wavefield::{ComplexAmplitude, FieldGrid, NODE_EPS};
