//! Compensated (Kahan–Babuška/Neumaier) accumulation.

use std::ops::AddAssign;

use num_complex::Complex64;

/// Running sum with a separate error term carried through `two_sum`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Componentwise compensated sum of complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

/// Slit count from which superposition sums switch to compensated
/// accumulation.
pub const COMPENSATED_FROM: usize = 256;

/// Sums `terms` in order, compensated when `count >= COMPENSATED_FROM`.
#[inline]
pub fn sum_complex<I>(count: usize, terms: I) -> Complex64
where
    I: Iterator<Item = Complex64>,
{
    if count >= COMPENSATED_FROM {
        let mut acc = ComplexSum::new();
        terms.for_each(|t| acc.add(t));
        acc.total()
    } else {
        terms.fold(Complex64::new(0.0, 0.0), |a, t| a + t)
    }
}
