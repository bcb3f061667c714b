use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};

/// Beam and grating description shared by every evaluation.
///
/// Slit `n` is centred at `(n − (N−1)/2)·d`, so the grating is symmetric
/// about `x = 0`. Values are validated on construction and immutable after.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioParams {
    wavelength: f64,
    slit_count: usize,
    slit_pitch: f64,
    slit_width: f64,
    sigma: f64,
}

impl ScenarioParams {
    /// Builds parameters with the effective half-width `σ = a/(2√2)`.
    pub fn new(wavelength: f64, slit_count: usize, slit_pitch: f64, slit_width: f64) -> Result<Self> {
        Self::with_sigma(
            wavelength,
            slit_count,
            slit_pitch,
            slit_width,
            default_sigma(slit_width),
        )
    }

    /// Builds parameters with an explicit effective half-width.
    pub fn with_sigma(
        wavelength: f64,
        slit_count: usize,
        slit_pitch: f64,
        slit_width: f64,
        sigma: f64,
    ) -> Result<Self> {
        let p = ScenarioParams {
            wavelength,
            slit_count,
            slit_pitch,
            slit_width,
            sigma,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            ("wavelength", self.wavelength),
            ("slit_pitch", self.slit_pitch),
            ("slit_width", self.slit_width),
            ("sigma", self.sigma),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if self.slit_count == 0 {
            return Err(Error::InvalidParams("slit_count must be >= 1".into()));
        }
        if self.slit_width > self.slit_pitch {
            return Err(Error::InvalidParams(format!(
                "slit_width {} exceeds slit_pitch {}",
                self.slit_width, self.slit_pitch
            )));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn slit_count(&self) -> usize {
        self.slit_count
    }

    pub fn slit_pitch(&self) -> f64 {
        self.slit_pitch
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Centre of slit `n`.
    #[inline]
    pub fn slit_center(&self, n: usize) -> f64 {
        (n as f64 - (self.slit_count as f64 - 1.0) / 2.0) * self.slit_pitch
    }

    /// `q = λ/(4πσ²)`; the complex spreading is `σ·(1 + i·q·z)`.
    #[inline]
    pub fn spreading_rate(&self) -> f64 {
        self.wavelength / (4.0 * PI * self.sigma * self.sigma)
    }

    /// Instantaneous Gaussian width `σ_z = σ·√(1 + (qz)²)`.
    #[inline]
    pub fn width_at(&self, z: f64) -> f64 {
        self.sigma * (self.spreading_rate() * z).hypot(1.0)
    }

    /// Talbot self-imaging length `2d²/λ`.
    pub fn talbot_length(&self) -> f64 {
        2.0 * self.slit_pitch * self.slit_pitch / self.wavelength
    }

    /// Same geometry with a different slit count.
    pub fn with_slit_count(&self, slit_count: usize) -> Result<Self> {
        Self::with_sigma(self.wavelength, slit_count, self.slit_pitch, self.slit_width, self.sigma)
    }
}

/// `a/(2√2)`: a Gaussian form factor `exp(−ξ²/2b²)` with `b = a/2` gives a
/// packet of half-width `b/√2`.
pub fn default_sigma(slit_width: f64) -> f64 {
    slit_width / (2.0 * SQRT_2)
}

pub fn talbot_length(params: &ScenarioParams) -> f64 {
    params.talbot_length()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        assert!(ScenarioParams::new(0.0, 7, 5.0, 1.0).is_err());
        assert!(ScenarioParams::new(0.5, 0, 5.0, 1.0).is_err());
        assert!(ScenarioParams::new(0.5, 7, 5.0, 6.0).is_err());
        assert!(ScenarioParams::with_sigma(0.5, 7, 5.0, 1.0, f64::NAN).is_err());
        assert!(ScenarioParams::new(0.5, 7, 5.0, 5.0).is_ok());
    }

    #[test]
    fn slit_centers_are_symmetric() {
        let p = ScenarioParams::new(0.5, 7, 5.0, 1.0).unwrap();
        assert_eq!(p.slit_center(0), -15.0);
        assert_eq!(p.slit_center(3), 0.0);
        assert_eq!(p.slit_center(6), 15.0);
        let p = ScenarioParams::new(0.5, 2, 5.0, 1.0).unwrap();
        assert_eq!(p.slit_center(0), -2.5);
        assert_eq!(p.slit_center(1), 2.5);
    }

    #[test]
    fn talbot_lengths() {
        let cases = [(5.0, 0.5, 100.0), (25.0, 0.5, 2500.0), (500.0, 0.5, 1.0e6), (250.0, 0.005, 2.5e7)];
        for (d, lambda, expected) in cases {
            let p = ScenarioParams::new(lambda, 3, d, d / 5.0).unwrap();
            assert_eq!(talbot_length(&p), expected);
        }
    }

    #[test]
    fn default_sigma_follows_width() {
        let p = ScenarioParams::new(0.5, 1, 5.0, 1.5).unwrap();
        assert!((p.sigma() - 0.530_330_085_889_910_6).abs() < 1e-15);
    }
}
