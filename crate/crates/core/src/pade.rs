//! Diagonal Padé approximant of `e^{ix}`.

use thiserror::Error;

use crate::linalg::{cis, Complex64};

/// Largest degree whose coefficients stay representable.
pub const MAX_DEGREE: usize = 85;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("Padé degree {0} exceeds the supported maximum {MAX_DEGREE}")]
pub struct DegreeTooLarge(pub usize);

/// `p(ix) / p(-ix)` with `p` the degree-`k` Padé numerator of `e^z`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    coefficients: Vec<f64>,
}

impl PadeApproximant {
    pub fn new(k: usize) -> Result<Self, DegreeTooLarge> {
        if k > MAX_DEGREE {
            return Err(DegreeTooLarge(k));
        }
        let mut coefficients = Vec::with_capacity(k + 1);
        let mut c = 1.0;
        coefficients.push(c);
        for j in 0..k {
            c *= (k - j) as f64 / (((2 * k - j) * (j + 1)) as f64);
            coefficients.push(c);
        }
        Ok(PadeApproximant { coefficients })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Taylor coefficients of `p(z)`, constant term first.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `p(ix)` by Horner's rule.
    pub fn numerator(&self, x: f64) -> Complex64 {
        let z = Complex64::new(0.0, x);
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `p(ix) / conj(p(ix))`, returned as a pure phase.
    pub fn eval(&self, x: f64) -> Complex64 {
        let p = self.numerator(x);
        cis(2.0 * p.im.atan2(p.re))
    }
}

/// Degree-`k` diagonal Padé approximant of `e^{ix}` evaluated at `x`.
pub fn pade_eval(k: usize, x: f64) -> Result<Complex64, DegreeTooLarge> {
    Ok(PadeApproximant::new(k)?.eval(x))
}
