//! Grid metrics: approximation error, unitarity deviation, real-axis
//! denominator scan.

use serde::Serialize;

use crate::barycentric::{Approximant, EvalError};
use crate::linalg::{cis, Complex64};

const EPS: f64 = f64::EPSILON;

/// Grid maximum and where it is attained (first occurrence in grid order).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMax {
    pub value: f64,
    pub location: f64,
    /// A grid point where evaluation hit a pole, if any.
    pub pole: Option<f64>,
}

/// Index of the largest entry, the lowest index on ties.
///
/// Panics on an empty slice.
pub fn argmax(values: &[f64]) -> usize {
    assert!(!values.is_empty(), "argmax of empty slice");
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = k;
        }
    }
    best
}

/// Pointwise `|r(x) - e^{ix}|`, with poles mapped to `+inf`.
pub fn pointwise_errors(approx: &Approximant, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&x| match approx.eval(x) {
            Ok(v) => (v - cis(x)).norm(),
            Err(_) => f64::INFINITY,
        })
        .collect()
}

fn grid_max(
    approx: &Approximant,
    grid: &[f64],
    metric: impl Fn(f64, Complex64) -> f64,
) -> GridMax {
    assert!(!grid.is_empty(), "empty evaluation grid");
    let mut out = GridMax {
        value: f64::NEG_INFINITY,
        location: grid[0],
        pole: None,
    };
    for &x in grid {
        let v = match approx.eval(x) {
            Ok(r) => metric(x, r),
            Err(EvalError::Pole { .. } | EvalError::RemovableAmbiguity { .. }) => {
                out.pole.get_or_insert(x);
                f64::INFINITY
            }
        };
        if v > out.value {
            out.value = v;
            out.location = x;
        }
    }
    out
}

/// `max_x |r(x) - e^{ix}|` over the grid.
pub fn max_error(approx: &Approximant, grid: &[f64]) -> GridMax {
    grid_max(approx, grid, |x, r| (r - cis(x)).norm())
}

/// `max_x ||r(x)| - 1|` over the grid.
pub fn unitarity_deviation(approx: &Approximant, grid: &[f64]) -> GridMax {
    grid_max(approx, grid, |_, r| (r.norm() - 1.0).abs())
}

/// Pointwise `||r(x)| - 1|`, with poles mapped to `+inf`.
pub fn pointwise_unitarity(approx: &Approximant, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&x| match approx.eval(x) {
            Ok(v) => (v.norm() - 1.0).abs(),
            Err(_) => f64::INFINITY,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleScan {
    pub min_denominator: f64,
    pub location: f64,
    pub threshold: f64,
    pub flagged: bool,
}

/// Smallest `|d(x)|` over the grid (`|xi(x)|` for Cayley forms), flagged
/// when below `1e3 eps` times the coefficient norm.
pub fn real_axis_pole_scan(approx: &Approximant, grid: &[f64]) -> PoleScan {
    assert!(!grid.is_empty(), "empty evaluation grid");
    let threshold = 1e3 * EPS * approx.denominator_norm();
    let mut min_denominator = f64::INFINITY;
    let mut location = grid[0];
    for &x in grid {
        let d = approx.denominator(x).norm();
        if d < min_denominator {
            min_denominator = d;
            location = x;
        }
    }
    PoleScan {
        min_denominator,
        location,
        threshold,
        flagged: min_denominator < threshold,
    }
}

pub use crate::barycentric::cayley_residual;

/// Cayley residual of whatever denominator coefficients the approximant
/// carries.
pub fn approximant_cayley_residual(approx: &Approximant) -> f64 {
    match approx {
        Approximant::Interpolatory(r) => cayley_residual(r.coefficients(), r.support()),
        Approximant::Cayley(r) => cayley_residual(r.coefficients(), r.support()),
        Approximant::NonInterpolatory(r) => cayley_residual(r.beta(), r.support()),
    }
}
