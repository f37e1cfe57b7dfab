//! Barycentric approximants of `e^{ix}`: interpolatory `n/d`, Cayley
//! `conj(xi)/xi`, and non-interpolatory `n_b/d_b`.
//!
//! Support-node hits are detected by exact float equality and resolved by
//! the removable-singularity limit.

use thiserror::Error;

use crate::linalg::{cis, norm2, Complex64};

const EPS: f64 = f64::EPSILON;

/// Default tolerance for the `f_j w_j = conj(w_j)` certificate.
pub const CAYLEY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("support has {support} nodes but {coefficients} coefficients were given")]
    LengthMismatch { support: usize, coefficients: usize },
    #[error("no support nodes")]
    Empty,
    #[error("support node {index} is not finite")]
    NonFiniteSupport { index: usize },
    #[error("coefficient {index} is not finite")]
    NonFiniteCoefficient { index: usize },
    #[error("support nodes {first} and {second} coincide")]
    DuplicateSupport { first: usize, second: usize },
    #[error("coefficient vector is zero")]
    ZeroCoefficients,
    #[error("coefficients are not Cayley-representable: max |f_j w_j - conj(w_j)| = {residual:e}")]
    NotCayley { residual: f64 },
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum EvalError {
    #[error("denominator vanishes at x = {x}")]
    Pole { x: f64 },
    #[error("x = {x} is a support node with zero coefficient")]
    RemovableAmbiguity { x: f64 },
}

fn check_support(support: &[f64], len: usize) -> Result<(), ApproxError> {
    if support.is_empty() {
        return Err(ApproxError::Empty);
    }
    if support.len() != len {
        return Err(ApproxError::LengthMismatch {
            support: support.len(),
            coefficients: len,
        });
    }
    if let Some(index) = support.iter().position(|y| !y.is_finite()) {
        return Err(ApproxError::NonFiniteSupport { index });
    }
    for (i, a) in support.iter().enumerate() {
        if let Some(j) = support[i + 1..].iter().position(|b| b == a) {
            return Err(ApproxError::DuplicateSupport {
                first: i,
                second: i + 1 + j,
            });
        }
    }
    Ok(())
}

fn check_finite(c: &[Complex64], offset: usize) -> Result<(), ApproxError> {
    match c.iter().position(|z| !z.is_finite()) {
        Some(i) => Err(ApproxError::NonFiniteCoefficient { index: offset + i }),
        None => Ok(()),
    }
}

/// Scales to unit Euclidean norm unless already within `16 eps` of it.
fn normalized(c: Vec<Complex64>, norm: f64) -> Vec<Complex64> {
    if (norm - 1.0).abs() <= 16.0 * EPS {
        c
    } else {
        c.into_iter().map(|z| z / norm).collect()
    }
}

fn support_hit(support: &[f64], x: f64) -> Option<usize> {
    support.iter().position(|&y| y == x)
}

/// `sum_j c_j / (x - y_j)` for `x` off the support.
fn partial_fraction(support: &[f64], coeffs: &[Complex64], x: f64) -> Complex64 {
    support
        .iter()
        .zip(coeffs)
        .fold(Complex64::new(0.0, 0.0), |acc, (&y, &c)| acc + c / (x - y))
}

/// `conj(xi) / xi`, computed as `e^{-2i arg xi}` so the result has unit
/// modulus to within one rounding.
pub fn conj_ratio(xi: Complex64) -> Complex64 {
    cis(-2.0 * xi.im.atan2(xi.re))
}

/// Max over `j` of `|e^{i y_j} w_j - conj(w_j)|`.
pub fn cayley_residual(coefficients: &[Complex64], support: &[f64]) -> f64 {
    coefficients
        .iter()
        .zip(support)
        .fold(0.0, |m, (&w, &y)| m.max((cis(y) * w - w.conj()).norm()))
}

/// `r(x) = sum f_j w_j / (x - y_j) / sum w_j / (x - y_j)` with `f_j = e^{i y_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricInterpolant {
    support: Vec<f64>,
    coefficients: Vec<Complex64>,
    values: Vec<Complex64>,
}

impl BarycentricInterpolant {
    pub fn new(support: Vec<f64>, coefficients: Vec<Complex64>) -> Result<Self, ApproxError> {
        check_support(&support, coefficients.len())?;
        check_finite(&coefficients, 0)?;
        let norm = norm2(&coefficients);
        if norm == 0.0 {
            return Err(ApproxError::ZeroCoefficients);
        }
        let values = support.iter().map(|&y| cis(y)).collect();
        Ok(BarycentricInterpolant {
            coefficients: normalized(coefficients, norm),
            support,
            values,
        })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `n(x)` as a partial-fraction sum; `x` must not be a support node.
    pub fn numerator(&self, x: f64) -> Complex64 {
        self.support
            .iter()
            .zip(self.coefficients.iter().zip(&self.values))
            .fold(Complex64::new(0.0, 0.0), |acc, (&y, (&w, &f))| {
                acc + f * w / (x - y)
            })
    }

    /// `d(x)` as a partial-fraction sum; `x` must not be a support node.
    pub fn denominator(&self, x: f64) -> Complex64 {
        partial_fraction(&self.support, &self.coefficients, x)
    }

    pub fn eval(&self, x: f64) -> Result<Complex64, EvalError> {
        if let Some(j) = support_hit(&self.support, x) {
            return if self.coefficients[j] == Complex64::new(0.0, 0.0) {
                Err(EvalError::RemovableAmbiguity { x })
            } else {
                Ok(self.values[j])
            };
        }
        let d = self.denominator(x);
        if d == Complex64::new(0.0, 0.0) {
            return Err(EvalError::Pole { x });
        }
        Ok(self.numerator(x) / d)
    }
}

/// `r(x) = conj(xi(x)) / xi(x)` with `xi(x) = sum_j w_j / (x - y_j)`.
///
/// In the interpolatory form the coefficients are certified to satisfy
/// `e^{i y_j} w_j = conj(w_j)`, so `r` interpolates at the support. In the
/// non-interpolatory form the numerator coefficients are `conj(w_j)` by
/// definition and nothing further is required.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleyApproximant {
    support: Vec<f64>,
    coefficients: Vec<Complex64>,
    /// `e^{i y_j}` when interpolatory.
    values: Option<Vec<Complex64>>,
}

/// Certifies interpolatory Cayley coefficients at the default tolerance.
pub fn to_cayley(
    coefficients: Vec<Complex64>,
    support: Vec<f64>,
) -> Result<CayleyApproximant, ApproxError> {
    CayleyApproximant::interpolatory(support, coefficients, CAYLEY_TOLERANCE)
}

impl CayleyApproximant {
    /// Interpolatory form; rejects coefficients whose Cayley residual exceeds `tol`.
    pub fn interpolatory(
        support: Vec<f64>,
        coefficients: Vec<Complex64>,
        tol: f64,
    ) -> Result<Self, ApproxError> {
        check_support(&support, coefficients.len())?;
        check_finite(&coefficients, 0)?;
        let norm = norm2(&coefficients);
        if norm == 0.0 {
            return Err(ApproxError::ZeroCoefficients);
        }
        let coefficients = normalized(coefficients, norm);
        let residual = cayley_residual(&coefficients, &support);
        if residual > tol {
            return Err(ApproxError::NotCayley { residual });
        }
        let values = support.iter().map(|&y| cis(y)).collect();
        Ok(CayleyApproximant {
            support,
            coefficients,
            values: Some(values),
        })
    }

    /// Non-interpolatory form `sum conj(b_j)/(x - y_j) / sum b_j/(x - y_j)`.
    pub fn non_interpolatory(
        support: Vec<f64>,
        denominator: Vec<Complex64>,
    ) -> Result<Self, ApproxError> {
        check_support(&support, denominator.len())?;
        check_finite(&denominator, 0)?;
        let norm = norm2(&denominator);
        if norm == 0.0 {
            return Err(ApproxError::ZeroCoefficients);
        }
        Ok(CayleyApproximant {
            support,
            coefficients: normalized(denominator, norm),
            values: None,
        })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn is_interpolatory(&self) -> bool {
        self.values.is_some()
    }

    /// `xi(x)`, equal to the coefficient itself at a support node.
    pub fn xi(&self, x: f64) -> Complex64 {
        match support_hit(&self.support, x) {
            Some(j) => self.coefficients[j],
            None => partial_fraction(&self.support, &self.coefficients, x),
        }
    }

    /// `(conj(xi(x)), xi(x))`.
    pub fn parts(&self, x: f64) -> (Complex64, Complex64) {
        let xi = self.xi(x);
        (xi.conj(), xi)
    }

    pub fn eval(&self, x: f64) -> Result<Complex64, EvalError> {
        if let (Some(values), Some(j)) = (&self.values, support_hit(&self.support, x)) {
            if self.coefficients[j] == Complex64::new(0.0, 0.0) {
                return Err(EvalError::RemovableAmbiguity { x });
            }
            // conj(w_j)/w_j = e^{i y_j} by the certificate
            return Ok(values[j]);
        }
        let xi = self.xi(x);
        if xi == Complex64::new(0.0, 0.0) {
            return Err(EvalError::Pole { x });
        }
        Ok(conj_ratio(xi))
    }
}

/// `r_b(x) = sum a_j / (x - y_j) / sum b_j / (x - y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonInterpolatoryApproximant {
    support: Vec<f64>,
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
}

impl NonInterpolatoryApproximant {
    pub fn new(
        support: Vec<f64>,
        alpha: Vec<Complex64>,
        beta: Vec<Complex64>,
    ) -> Result<Self, ApproxError> {
        check_support(&support, alpha.len())?;
        check_support(&support, beta.len())?;
        check_finite(&alpha, 0)?;
        check_finite(&beta, alpha.len())?;
        let norm = norm2(&alpha).hypot(norm2(&beta));
        if norm == 0.0 {
            return Err(ApproxError::ZeroCoefficients);
        }
        let (alpha, beta) = if (norm - 1.0).abs() <= 16.0 * EPS {
            (alpha, beta)
        } else {
            (
                alpha.into_iter().map(|z| z / norm).collect(),
                beta.into_iter().map(|z| z / norm).collect(),
            )
        };
        Ok(NonInterpolatoryApproximant {
            support,
            alpha,
            beta,
        })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Complex64] {
        &self.beta
    }

    /// `d_b(x)`, or `b_j` at a support node.
    pub fn denominator(&self, x: f64) -> Complex64 {
        match support_hit(&self.support, x) {
            Some(j) => self.beta[j],
            None => partial_fraction(&self.support, &self.beta, x),
        }
    }

    pub fn numerator(&self, x: f64) -> Complex64 {
        match support_hit(&self.support, x) {
            Some(j) => self.alpha[j],
            None => partial_fraction(&self.support, &self.alpha, x),
        }
    }

    pub fn eval(&self, x: f64) -> Result<Complex64, EvalError> {
        let d = self.denominator(x);
        if d == Complex64::new(0.0, 0.0) {
            return Err(EvalError::Pole { x });
        }
        Ok(self.numerator(x) / d)
    }
}

/// Any of the three approximant forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Approximant {
    Interpolatory(BarycentricInterpolant),
    Cayley(CayleyApproximant),
    NonInterpolatory(NonInterpolatoryApproximant),
}

impl Approximant {
    pub fn eval(&self, x: f64) -> Result<Complex64, EvalError> {
        match self {
            Approximant::Interpolatory(r) => r.eval(x),
            Approximant::Cayley(r) => r.eval(x),
            Approximant::NonInterpolatory(r) => r.eval(x),
        }
    }

    /// Denominator value used by the evaluation at `x`, with support nodes
    /// mapped to their coefficient (the limit form).
    pub fn denominator(&self, x: f64) -> Complex64 {
        match self {
            Approximant::Interpolatory(r) => match support_hit(&r.support, x) {
                Some(j) => r.coefficients[j],
                None => r.denominator(x),
            },
            Approximant::Cayley(r) => r.xi(x),
            Approximant::NonInterpolatory(r) => r.denominator(x),
        }
    }

    pub fn support(&self) -> &[f64] {
        match self {
            Approximant::Interpolatory(r) => &r.support,
            Approximant::Cayley(r) => &r.support,
            Approximant::NonInterpolatory(r) => &r.support,
        }
    }

    /// Euclidean norm of the denominator coefficients.
    pub fn denominator_norm(&self) -> f64 {
        match self {
            Approximant::Interpolatory(r) => norm2(&r.coefficients),
            Approximant::Cayley(r) => norm2(&r.coefficients),
            Approximant::NonInterpolatory(r) => norm2(&r.beta),
        }
    }

    /// Type `(m-1, m-1)` degree, `m` being the support size.
    pub fn degree(&self) -> usize {
        self.support().len() - 1
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Approximant::Interpolatory(_) => "interpolatory",
            Approximant::Cayley(r) if r.is_interpolatory() => "cayley",
            Approximant::Cayley(_) => "cayley_non_interpolatory",
            Approximant::NonInterpolatory(_) => "non_interpolatory",
        }
    }
}

impl From<BarycentricInterpolant> for Approximant {
    fn from(r: BarycentricInterpolant) -> Self {
        Approximant::Interpolatory(r)
    }
}

impl From<CayleyApproximant> for Approximant {
    fn from(r: CayleyApproximant) -> Self {
        Approximant::Cayley(r)
    }
}

impl From<NonInterpolatoryApproximant> for Approximant {
    fn from(r: NonInterpolatoryApproximant) -> Self {
        Approximant::NonInterpolatory(r)
    }
}
