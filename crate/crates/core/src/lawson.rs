//! Lawson re-weighting toward a minimax fit, in the original (complex SVD of
//! the expanded Loewner matrix) and modified (real SVD, Cayley output)
//! variants.

use serde::Serialize;
use thiserror::Error;

use crate::barycentric::{
    ApproxError, Approximant, CayleyApproximant, EvalError, NonInterpolatoryApproximant,
};
use crate::diagnostics::argmax;
use crate::linalg::{
    cis, svd_complex_with, svd_real_with, Complex64, ComplexMatrix, RealMatrix, SvdConfig,
    SvdError,
};
use crate::loewner::{fold_real_pair, modified_cauchy, phase_diagonals, NodeError, NodeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Original,
    Modified,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "original" => Ok(Variant::Original),
            "modified" => Ok(Variant::Modified),
            _ => Err(format!("unknown variant '{s}' (expected original or modified)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawsonConfig {
    pub n_lawson: usize,
    pub variant: Variant,
    pub svd: SvdConfig,
}

impl LawsonConfig {
    pub fn new(n_lawson: usize, variant: Variant) -> Self {
        LawsonConfig {
            n_lawson,
            variant,
            svd: SvdConfig::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LawsonError {
    #[error("at least one Lawson step is required")]
    NoSteps,
    #[error(transparent)]
    Nodes(#[from] NodeError),
    #[error(transparent)]
    Svd(#[from] SvdError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error("step {step}: {source}")]
    Eval { step: usize, source: EvalError },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LawsonStep {
    pub step: usize,
    /// Max error over the (augmented) test nodes for this step's approximant.
    pub max_error: f64,
    pub error_location: f64,
    /// Node where the updated weight vector attains its maximum.
    pub weight_peak: f64,
    /// Smallest singular value of `[M | -S_F M]`.
    pub sigma_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawsonTrace {
    pub steps: Vec<LawsonStep>,
    /// Stopped early because every test-node error vanished.
    pub exact_fit: bool,
}

#[derive(Debug, Clone)]
pub struct LawsonFit {
    pub approximant: Approximant,
    pub trace: LawsonTrace,
    pub weights: Vec<f64>,
    /// Test nodes with the support nodes appended.
    pub test: Vec<f64>,
}

/// `mu_k |e_k|` normalized to unit max norm; `None` when every product is zero.
pub fn lawson_weight_update(mu: &[f64], errors: &[Complex64]) -> Option<Vec<f64>> {
    assert_eq!(mu.len(), errors.len(), "weight and error lengths differ");
    let raw: Vec<f64> = mu.iter().zip(errors).map(|(&m, e)| m * e.norm()).collect();
    let peak = raw.iter().fold(0.0_f64, |a, &b| a.max(b));
    if peak == 0.0 {
        return None;
    }
    Some(raw.into_iter().map(|v| v / peak).collect())
}

/// Runs `n_lawson` re-weighted least-squares steps on the support set.
pub fn lawson_fit(
    test: &[f64],
    support: &[f64],
    cfg: &LawsonConfig,
) -> Result<LawsonFit, LawsonError> {
    if cfg.n_lawson == 0 {
        return Err(LawsonError::NoSteps);
    }
    let mut nodes: Vec<f64> = test.to_vec();
    nodes.extend(support.iter().filter(|y| !test.contains(y)));
    let set = NodeSet::non_interpolatory(nodes.clone(), support.to_vec())?;
    let c = modified_cauchy(&set);
    let ph = phase_diagonals(&set);
    let f: Vec<Complex64> = nodes.iter().map(|&x| cis(x)).collect();
    let (n, m) = c.shape();

    let mut mu = vec![1.0_f64; n];
    let mut steps = Vec::with_capacity(cfg.n_lawson);
    let mut approximant = None;
    for step in 1..=cfg.n_lawson {
        let s: Vec<f64> = mu.iter().map(|v: &f64| v.sqrt()).collect();
        let (approx, sigma_min): (Approximant, f64) = match cfg.variant {
            Variant::Modified => {
                let b = RealMatrix::from_fn(n, 2 * m, |k, j| {
                    let r = ph.test_phase[k];
                    if j < m {
                        r.re * s[k] * c[(k, j)]
                    } else {
                        -r.im * s[k] * c[(k, j - m)]
                    }
                });
                let svd = svd_real_with(&b, &cfg.svd)?;
                let (_, beta) = fold_real_pair(&svd.last_right_vector());
                let r = CayleyApproximant::non_interpolatory(support.to_vec(), beta)?;
                (r.into(), svd.sigma_min() * std::f64::consts::SQRT_2)
            }
            Variant::Original => {
                let e = ComplexMatrix::from_fn(n, 2 * m, |k, j| {
                    if j < m {
                        Complex64::new(s[k] * c[(k, j)], 0.0)
                    } else {
                        -ph.test_values[k] * (s[k] * c[(k, j - m)])
                    }
                });
                let svd = svd_complex_with(&e, &cfg.svd)?;
                let gamma = svd.last_right_vector();
                let r = NonInterpolatoryApproximant::new(
                    support.to_vec(),
                    gamma[..m].to_vec(),
                    gamma[m..].to_vec(),
                )?;
                (r.into(), svd.sigma_min())
            }
        };
        let mut errors = Vec::with_capacity(n);
        for (&x, &fx) in nodes.iter().zip(&f) {
            let v = approx
                .eval(x)
                .map_err(|source| LawsonError::Eval { step, source })?;
            errors.push(fx - v);
        }
        let moduli: Vec<f64> = errors.iter().map(|e| e.norm()).collect();
        let worst = argmax(&moduli);
        approximant = Some(approx);
        match lawson_weight_update(&mu, &errors) {
            Some(next) => {
                mu = next;
                steps.push(LawsonStep {
                    step,
                    max_error: moduli[worst],
                    error_location: nodes[worst],
                    weight_peak: nodes[argmax(&mu)],
                    sigma_min,
                });
            }
            None => {
                steps.push(LawsonStep {
                    step,
                    max_error: 0.0,
                    error_location: nodes[0],
                    weight_peak: nodes[argmax(&mu)],
                    sigma_min,
                });
                return Ok(LawsonFit {
                    approximant: approximant.unwrap(),
                    trace: LawsonTrace {
                        steps,
                        exact_fit: true,
                    },
                    weights: mu,
                    test: nodes,
                });
            }
        }
    }
    Ok(LawsonFit {
        approximant: approximant.unwrap(),
        trace: LawsonTrace {
            steps,
            exact_fit: false,
        },
        weights: mu,
        test: nodes,
    })
}
