//! Greedy AAA for `e^{ix}` on real nodes.
//!
//! The original variant takes the smallest right singular vector of the
//! complex Loewner matrix. The modified variant takes it from the real
//! re-scaled matrix and lifts it by `iK`, which yields a Cayley-form
//! approximant with `|r| = 1` on the real line.

use serde::Serialize;
use thiserror::Error;

use crate::barycentric::{
    ApproxError, Approximant, BarycentricInterpolant, CayleyApproximant, CAYLEY_TOLERANCE,
};
use crate::diagnostics::{argmax, pointwise_errors};
use crate::lawson::{lawson_fit, LawsonConfig, LawsonError, LawsonFit};
pub use crate::lawson::Variant;
use crate::linalg::{cis, svd_complex_with, Complex64, SvdConfig};
use crate::loewner::{
    check_distinct, is_degenerate, loewner, min_singular_coefficients, phase_diagonals, rescaled_loewner,
    LoewnerError, NodeError, NodeSet,
};

#[derive(Debug, Clone, PartialEq)]
pub struct AaaConfig {
    pub m_max: usize,
    pub tol: f64,
    pub variant: Variant,
    pub n_lawson: usize,
    pub svd: SvdConfig,
}

impl AaaConfig {
    pub fn new(m_max: usize, variant: Variant) -> Self {
        AaaConfig {
            m_max,
            tol: 1e-13,
            variant,
            n_lawson: 0,
            svd: SvdConfig::default(),
        }
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn lawson(mut self, n_lawson: usize) -> Self {
        self.n_lawson = n_lawson;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AaaError {
    #[error("need at least 2 test nodes, got {0}")]
    TooFewNodes(usize),
    #[error("m_max must satisfy 1 <= m_max < {nodes}, got {m_max}")]
    BadDegree { m_max: usize, nodes: usize },
    #[error("tolerance must be finite and nonnegative, got {0}")]
    BadTolerance(f64),
    #[error("empty input")]
    Empty,
    #[error(transparent)]
    Nodes(#[from] NodeError),
    #[error(transparent)]
    Loewner(#[from] LoewnerError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error("Lawson phase failed: {0}")]
    Lawson(#[from] LawsonError),
}

impl From<crate::linalg::SvdError> for AaaError {
    fn from(e: crate::linalg::SvdError) -> Self {
        AaaError::Loewner(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Tolerance,
    MaxDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AaaStep {
    /// Number of support nodes after this step.
    pub m: usize,
    /// Index of the promoted node in the input.
    pub node: usize,
    pub x: f64,
    /// Max error over the remaining test nodes.
    pub max_error: f64,
    pub sigma_min: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AaaTrace {
    pub steps: Vec<AaaStep>,
    pub stop: StopReason,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct AaaFit {
    pub approximant: Approximant,
    pub support: Vec<f64>,
    /// Test nodes left after promoting the support.
    pub test: Vec<f64>,
    pub trace: AaaTrace,
    pub lawson: Option<LawsonFit>,
}

impl AaaFit {
    /// The Lawson-refined approximant if a Lawson phase ran, else the AAA one.
    pub fn final_approximant(&self) -> &Approximant {
        self.lawson
            .as_ref()
            .map_or(&self.approximant, |l| &l.approximant)
    }
}

/// Index of the largest `|F_k - r_k|`, lowest index on ties.
pub fn greedy_select(f: &[Complex64], r: &[Complex64]) -> Result<usize, AaaError> {
    assert_eq!(f.len(), r.len(), "value and approximation lengths differ");
    if f.is_empty() {
        return Err(AaaError::Empty);
    }
    let errors: Vec<f64> = f.iter().zip(r).map(|(a, b)| (a - b).norm()).collect();
    Ok(argmax(&errors))
}

/// Approximant for a fixed support set, fitted over the given test nodes.
pub fn fit_support(
    test: &[f64],
    support: &[f64],
    variant: Variant,
    svd: &SvdConfig,
) -> Result<(Approximant, f64, bool), AaaError> {
    let set = NodeSet::interpolatory(test.to_vec(), support.to_vec())?;
    match variant {
        Variant::Modified => {
            let lhat = rescaled_loewner(&set)?;
            let ph = phase_diagonals(&set);
            let ms = min_singular_coefficients(&lhat, &ph.support_phase, svd)?;
            let r = CayleyApproximant::interpolatory(
                support.to_vec(),
                ms.coefficients.clone(),
                CAYLEY_TOLERANCE,
            )?;
            Ok((r.into(), ms.sigma_min(), ms.degenerate))
        }
        Variant::Original => {
            let m = support.len();
            let (w, sv) = if test.is_empty() {
                let mut e = vec![Complex64::new(0.0, 0.0); m];
                e[m - 1] = Complex64::new(1.0, 0.0);
                (e, vec![0.0; m])
            } else {
                let svd = svd_complex_with(&loewner(&set)?, svd)?;
                (svd.last_right_vector(), svd.singular_values)
            };
            let r = BarycentricInterpolant::new(support.to_vec(), w)?;
            Ok((r.into(), *sv.last().unwrap(), is_degenerate(&sv)))
        }
    }
}

/// Greedy AAA on distinct real nodes, followed by an optional Lawson phase.
pub fn aaa_fit(nodes: &[f64], cfg: &AaaConfig) -> Result<AaaFit, AaaError> {
    let n = nodes.len();
    if n < 2 {
        return Err(AaaError::TooFewNodes(n));
    }
    if cfg.m_max == 0 || cfg.m_max >= n {
        return Err(AaaError::BadDegree {
            m_max: cfg.m_max,
            nodes: n,
        });
    }
    if !(cfg.tol >= 0.0 && cfg.tol.is_finite()) {
        return Err(AaaError::BadTolerance(cfg.tol));
    }
    check_distinct("test", nodes)?;

    let f: Vec<Complex64> = nodes.iter().map(|&x| cis(x)).collect();
    let mean = f.iter().sum::<Complex64>() / n as f64;
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut errors: Vec<f64> = f.iter().map(|v| (v - mean).norm()).collect();
    let mut steps = Vec::new();
    let mut last: Option<Approximant> = None;
    let mut stop = StopReason::MaxDegree;

    for m in 1..=cfg.m_max {
        let pick = argmax(&errors);
        let node = remaining.remove(pick);
        chosen.push(node);
        let support: Vec<f64> = chosen.iter().map(|&j| nodes[j]).collect();
        let test: Vec<f64> = remaining.iter().map(|&k| nodes[k]).collect();
        let (approx, sigma_min, degenerate) = fit_support(&test, &support, cfg.variant, &cfg.svd)?;
        errors = pointwise_errors(&approx, &test);
        let max_error = errors.iter().fold(0.0_f64, |a, &b| a.max(b));
        steps.push(AaaStep {
            m,
            node,
            x: nodes[node],
            max_error,
            sigma_min,
            degenerate,
        });
        last = Some(approx);
        if max_error <= cfg.tol {
            stop = StopReason::Tolerance;
            break;
        }
    }

    let converged = stop == StopReason::Tolerance;
    let support: Vec<f64> = chosen.iter().map(|&j| nodes[j]).collect();
    let test: Vec<f64> = remaining.iter().map(|&k| nodes[k]).collect();
    let approximant = last.expect("at least one step runs");

    let lawson = if cfg.n_lawson > 0 {
        let lcfg = LawsonConfig {
            n_lawson: cfg.n_lawson,
            variant: cfg.variant,
            svd: cfg.svd.clone(),
        };
        Some(lawson_fit(&test, &support, &lcfg)?)
    } else {
        None
    };

    Ok(AaaFit {
        approximant,
        support,
        test,
        trace: AaaTrace {
            steps,
            stop,
            converged,
        },
        lawson,
    })
}
