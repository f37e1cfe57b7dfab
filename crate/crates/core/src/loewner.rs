//! Loewner-type matrices for `f(x) = e^{ix}` and their distinguished
//! singular vectors.
//!
//! Every matrix here is `S_F M - M S_f` (or the expanded `[M | -S_F M]`) for
//! a real `M`. Unit-modulus diagonal scalings turn both into real matrices
//! with the same singular values, so a real SVD yields coefficient vectors
//! whose complex phases are exact.

use thiserror::Error;

use crate::linalg::{
    cis, svd_real_with, Complex64, ComplexMatrix, RealMatrix, SvdConfig, SvdError,
};

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NodeError {
    #[error("{which} node {index} is not finite")]
    NonFinite { which: &'static str, index: usize },
    #[error("{which} nodes {first} and {second} coincide (value {value})")]
    Duplicate {
        which: &'static str,
        first: usize,
        second: usize,
        value: f64,
    },
    #[error("test node {test} coincides with support node {support} (value {value})")]
    Collision {
        test: usize,
        support: usize,
        value: f64,
    },
    #[error("weight {index} must be positive and finite, got {value}")]
    BadWeight { index: usize, value: f64 },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("no support nodes")]
    NoSupport,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoewnerError {
    #[error(transparent)]
    Nodes(#[from] NodeError),
    #[error(transparent)]
    Svd(#[from] SvdError),
    #[error("expected a matrix with {expected} columns, got {got}")]
    Shape { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeMode {
    /// Test and support nodes are disjoint.
    Interpolatory,
    /// Test nodes may coincide with support nodes.
    NonInterpolatory,
}

/// Test nodes, support nodes and per-test-node weights.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    test: Vec<f64>,
    support: Vec<f64>,
    weights: Vec<f64>,
    mode: NodeMode,
    /// For each test node, the support node it equals (non-interpolatory mode).
    overlap: Vec<Option<usize>>,
}

impl NodeSet {
    pub fn interpolatory(test: Vec<f64>, support: Vec<f64>) -> Result<Self, NodeError> {
        Self::build(test, support, NodeMode::Interpolatory)
    }

    pub fn non_interpolatory(test: Vec<f64>, support: Vec<f64>) -> Result<Self, NodeError> {
        Self::build(test, support, NodeMode::NonInterpolatory)
    }

    fn build(test: Vec<f64>, support: Vec<f64>, mode: NodeMode) -> Result<Self, NodeError> {
        if support.is_empty() {
            return Err(NodeError::NoSupport);
        }
        check_distinct("test", &test)?;
        check_distinct("support", &support)?;
        let overlap: Vec<Option<usize>> = test
            .iter()
            .map(|&x| support.iter().position(|&y| y == x))
            .collect();
        if mode == NodeMode::Interpolatory {
            if let Some((k, j)) = overlap
                .iter()
                .enumerate()
                .find_map(|(k, j)| j.map(|j| (k, j)))
            {
                return Err(NodeError::Collision {
                    test: k,
                    support: j,
                    value: test[k],
                });
            }
        }
        let weights = vec![1.0; test.len()];
        Ok(NodeSet {
            test,
            support,
            weights,
            mode,
            overlap,
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self, NodeError> {
        if weights.len() != self.test.len() {
            return Err(NodeError::WeightCount {
                expected: self.test.len(),
                got: weights.len(),
            });
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, &w)| !(w > 0.0 && w.is_finite()))
        {
            return Err(NodeError::BadWeight { index, value });
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn test(&self) -> &[f64] {
        &self.test
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mode(&self) -> NodeMode {
        self.mode
    }

    /// Index of the support node equal to test node `k`, if any.
    pub fn overlap(&self, k: usize) -> Option<usize> {
        self.overlap[k]
    }

    fn sqrt_weights(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.sqrt()).collect()
    }
}

/// Rejects non-finite or repeated node values.
pub fn check_distinct(which: &'static str, nodes: &[f64]) -> Result<(), NodeError> {
    if let Some(index) = nodes.iter().position(|x| !x.is_finite()) {
        return Err(NodeError::NonFinite { which, index });
    }
    let mut idx: Vec<usize> = (0..nodes.len()).collect();
    idx.sort_by(|&a, &b| nodes[a].total_cmp(&nodes[b]));
    for w in idx.windows(2) {
        if nodes[w[0]] == nodes[w[1]] {
            let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(NodeError::Duplicate {
                which,
                first,
                second,
                value: nodes[first],
            });
        }
    }
    Ok(())
}

/// `(1 - e^{-i theta}) / |1 - e^{-i theta}|`, or `i` when `e^{-i theta}` is
/// within `4 eps` of one.
///
/// Uses `1 - e^{-i theta} = 2 sin(theta/2) (sin(theta/2) + i cos(theta/2))`,
/// which avoids the cancellation in `1 - cos(theta)`.
pub fn unit_phase(theta: f64) -> Complex64 {
    let (s, c) = (0.5 * theta).sin_cos();
    if 2.0 * s.abs() <= 4.0 * EPS {
        return Complex64::i();
    }
    if s > 0.0 {
        Complex64::new(s, c)
    } else {
        Complex64::new(-s, -c)
    }
}

/// Diagonal scalings and exponentials attached to a node set.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagonals {
    /// `K`: unit phases of the support nodes.
    pub support_phase: Vec<Complex64>,
    /// `R`: unit phases of the test nodes.
    pub test_phase: Vec<Complex64>,
    /// `S_f`: `e^{i y_j}`.
    pub support_values: Vec<Complex64>,
    /// `S_F`: `e^{i x_k}`.
    pub test_values: Vec<Complex64>,
}

pub fn phase_diagonals(nodes: &NodeSet) -> PhaseDiagonals {
    PhaseDiagonals {
        support_phase: nodes.support.iter().map(|&y| unit_phase(y)).collect(),
        test_phase: nodes.test.iter().map(|&x| unit_phase(x)).collect(),
        support_values: nodes.support.iter().map(|&y| cis(y)).collect(),
        test_values: nodes.test.iter().map(|&x| cis(x)).collect(),
    }
}

fn require_disjoint(nodes: &NodeSet) -> Result<(), NodeError> {
    match nodes
        .overlap
        .iter()
        .enumerate()
        .find_map(|(k, j)| j.map(|j| (k, j)))
    {
        Some((k, j)) => Err(NodeError::Collision {
            test: k,
            support: j,
            value: nodes.test[k],
        }),
        None => Ok(()),
    }
}

/// Cauchy matrix `C_kj = 1 / (x_k - y_j)`.
pub fn cauchy(nodes: &NodeSet) -> Result<RealMatrix, NodeError> {
    require_disjoint(nodes)?;
    Ok(RealMatrix::from_fn(
        nodes.test.len(),
        nodes.support.len(),
        |k, j| 1.0 / (nodes.test[k] - nodes.support[j]),
    ))
}

/// Loewner matrix `L_kj = (e^{i x_k} - e^{i y_j}) / (x_k - y_j)`, entrywise.
///
/// Evaluated as `2i sin(d/2)/d e^{i x_k/2} e^{i y_j/2}` with `d = x_k - y_j`,
/// which avoids cancellation in the numerator for close nodes.
pub fn loewner(nodes: &NodeSet) -> Result<ComplexMatrix, NodeError> {
    require_disjoint(nodes)?;
    let half = |t: &f64| cis(0.5 * t);
    let hx: Vec<Complex64> = nodes.test.iter().map(half).collect();
    let hy: Vec<Complex64> = nodes.support.iter().map(half).collect();
    Ok(ComplexMatrix::from_fn(nodes.test.len(), nodes.support.len(), |k, j| {
        let d = nodes.test[k] - nodes.support[j];
        Complex64::new(0.0, 2.0 * (0.5 * d).sin() / d) * (hx[k] * hy[j])
    }))
}

/// The factored form `S_F C - C S_f` of the Loewner matrix.
pub fn loewner_factored(nodes: &NodeSet) -> Result<ComplexMatrix, NodeError> {
    let c = cauchy(nodes)?;
    let ph = phase_diagonals(nodes);
    Ok(ComplexMatrix::from_fn(c.rows(), c.cols(), |k, j| {
        ph.test_values[k] * c[(k, j)] - c[(k, j)] * ph.support_values[j]
    }))
}

/// `diag(sqrt(mu)) L`.
pub fn weighted_loewner(nodes: &NodeSet) -> Result<ComplexMatrix, NodeError> {
    let l = loewner(nodes)?;
    let sw = nodes.sqrt_weights();
    Ok(ComplexMatrix::from_fn(l.rows(), l.cols(), |k, j| l[(k, j)] * sw[k]))
}

/// Real re-scaled Loewner matrix `2 Im(R M K*)` with `M = diag(sqrt(mu)) C`.
pub fn rescaled_loewner(nodes: &NodeSet) -> Result<RealMatrix, NodeError> {
    let c = cauchy(nodes)?;
    let ph = phase_diagonals(nodes);
    let sw = nodes.sqrt_weights();
    Ok(RealMatrix::from_fn(c.rows(), c.cols(), |k, j| {
        let g = phase_gap(
            nodes.test[k],
            nodes.support[j],
            ph.test_phase[k],
            ph.support_phase[j],
        );
        2.0 * (sw[k] * c[(k, j)]) * g
    }))
}

/// `Im(R_kk conj(K_jj))`. Off the degenerate branch this is
/// `+-sin((y - x)/2)`, evaluated directly so close nodes keep full relative
/// accuracy.
fn phase_gap(x: f64, y: f64, r: Complex64, k: Complex64) -> f64 {
    if r.re == 0.0 || k.re == 0.0 {
        return r.im * k.re - r.re * k.im;
    }
    // unit_phase flips the sign of (sin, cos) whenever sin(t/2) < 0.
    let sign = (0.5 * x).sin().signum() * (0.5 * y).sin().signum();
    sign * (0.5 * (y - x)).sin()
}

/// `-i R L_mu K` evaluated in complex arithmetic; its imaginary part is
/// rounding noise and its real part is [`rescaled_loewner`].
pub fn rotated_loewner(nodes: &NodeSet) -> Result<ComplexMatrix, NodeError> {
    let l = weighted_loewner(nodes)?;
    let ph = phase_diagonals(nodes);
    let minus_i = Complex64::new(0.0, -1.0);
    Ok(ComplexMatrix::from_fn(l.rows(), l.cols(), |k, j| {
        minus_i * ph.test_phase[k] * l[(k, j)] * ph.support_phase[j]
    }))
}

/// Coefficients minimizing the (weighted) linearized error, obtained from
/// the real SVD of the re-scaled Loewner matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MinSingular {
    /// `i K v` with `v` the last right singular vector.
    pub coefficients: Vec<Complex64>,
    pub singular_values: Vec<f64>,
    /// The smallest singular value is within `8 eps sigma_1` of the next one.
    pub degenerate: bool,
}

impl MinSingular {
    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().unwrap()
    }
}

/// `sigma_{m-1} - sigma_m <= 8 eps sigma_1` for descending singular values.
pub fn is_degenerate(sv: &[f64]) -> bool {
    let m = sv.len();
    m >= 2 && sv[m - 2] - sv[m - 1] <= 8.0 * EPS * sv[0]
}

/// `w = i K v_min` for a re-scaled Loewner matrix and the support phases `K`.
pub fn min_singular_coefficients(
    rescaled: &RealMatrix,
    support_phase: &[Complex64],
    cfg: &SvdConfig,
) -> Result<MinSingular, LoewnerError> {
    let m = support_phase.len();
    if rescaled.cols() != m {
        return Err(LoewnerError::Shape {
            expected: m,
            got: rescaled.cols(),
        });
    }
    let (zeta, singular_values) = if rescaled.rows() == 0 {
        // Every vector is a null vector; take the last unit vector.
        let mut e = vec![0.0; m];
        e[m - 1] = 1.0;
        (e, vec![0.0; m])
    } else {
        let svd = svd_real_with(rescaled, cfg)?;
        (svd.last_right_vector(), svd.singular_values)
    };
    let coefficients = phase_lift(support_phase, &zeta);
    Ok(MinSingular {
        coefficients,
        degenerate: is_degenerate(&singular_values),
        singular_values,
    })
}

/// `i K zeta` for real `zeta`.
pub fn phase_lift(support_phase: &[Complex64], zeta: &[f64]) -> Vec<Complex64> {
    support_phase
        .iter()
        .zip(zeta)
        .map(|(k, &z)| Complex64::new(-k.im * z, k.re * z))
        .collect()
}

/// Cauchy matrix with unit rows at test nodes that coincide with support nodes.
pub fn modified_cauchy(nodes: &NodeSet) -> RealMatrix {
    RealMatrix::from_fn(nodes.test.len(), nodes.support.len(), |k, j| {
        match nodes.overlap[k] {
            Some(jk) => {
                if j == jk {
                    1.0
                } else {
                    0.0
                }
            }
            None => 1.0 / (nodes.test[k] - nodes.support[j]),
        }
    })
}

/// `diag(sqrt(mu)) C'`.
fn weighted_modified_cauchy(nodes: &NodeSet) -> RealMatrix {
    modified_cauchy(nodes).scale_rows(&nodes.sqrt_weights())
}

/// Expanded Loewner matrix `[M | -S_F M]`, `M = diag(sqrt(mu)) C'`.
pub fn expanded_loewner(nodes: &NodeSet) -> ComplexMatrix {
    let m = weighted_modified_cauchy(nodes);
    let ph = phase_diagonals(nodes);
    let cols = m.cols();
    ComplexMatrix::from_fn(m.rows(), 2 * cols, |k, j| {
        if j < cols {
            Complex64::new(m[(k, j)], 0.0)
        } else {
            -ph.test_values[k] * m[(k, j - cols)]
        }
    })
}

/// Real matrix `[Re(R) M | -Im(R) M]`, `M = diag(sqrt(mu)) C'`.
pub fn bhat(nodes: &NodeSet) -> RealMatrix {
    let m = weighted_modified_cauchy(nodes);
    let ph = phase_diagonals(nodes);
    let cols = m.cols();
    RealMatrix::from_fn(m.rows(), 2 * cols, |k, j| {
        let r = ph.test_phase[k];
        if j < cols {
            r.re * m[(k, j)]
        } else {
            -r.im * m[(k, j - cols)]
        }
    })
}

/// Minimizing coefficient pair of the expanded Loewner matrix, with
/// `alpha_j = conj(beta_j)` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MinSingularPair {
    pub alpha: Vec<Complex64>,
    pub beta: Vec<Complex64>,
    /// Singular values of `B-hat` (those of `[M | -S_F M]` divided by `sqrt 2`).
    pub singular_values: Vec<f64>,
    pub degenerate: bool,
}

impl MinSingularPair {
    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().unwrap()
    }
}

/// `(alpha, beta) = ((a + i b) / sqrt 2, (a - i b) / sqrt 2)` for a real
/// vector `[a; b]` of even length.
pub fn fold_real_pair(gamma_hat: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    assert!(gamma_hat.len() % 2 == 0, "odd-length coefficient vector");
    let m = gamma_hat.len() / 2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let alpha = (0..m)
        .map(|j| Complex64::new(gamma_hat[j] * s, gamma_hat[j + m] * s))
        .collect();
    let beta = (0..m)
        .map(|j| Complex64::new(gamma_hat[j] * s, -gamma_hat[j + m] * s))
        .collect();
    (alpha, beta)
}

pub fn min_singular_pair(
    bhat: &RealMatrix,
    cfg: &SvdConfig,
) -> Result<MinSingularPair, LoewnerError> {
    if bhat.cols() % 2 != 0 {
        return Err(LoewnerError::Shape {
            expected: bhat.cols() + 1,
            got: bhat.cols(),
        });
    }
    let svd = svd_real_with(bhat, cfg)?;
    let (alpha, beta) = fold_real_pair(&svd.last_right_vector());
    Ok(MinSingularPair {
        alpha,
        beta,
        degenerate: is_degenerate(&svd.singular_values),
        singular_values: svd.singular_values,
    })
}
