//! On-disk formats: approximant JSON, node files, atomic writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::barycentric::{
    ApproxError, Approximant, BarycentricInterpolant, CayleyApproximant,
    NonInterpolatoryApproximant, CAYLEY_TOLERANCE,
};
use crate::linalg::Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientDoc {
    pub support: Vec<f64>,
    pub coeff_re: Vec<f64>,
    pub coeff_im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub support: Vec<f64>,
    pub alpha_re: Vec<f64>,
    pub alpha_im: Vec<f64>,
    pub beta_re: Vec<f64>,
    pub beta_im: Vec<f64>,
}

/// JSON document for any approximant, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ApproximantDoc {
    Interpolatory(CoefficientDoc),
    Cayley(CoefficientDoc),
    CayleyNonInterpolatory(CoefficientDoc),
    NonInterpolatory(PairDoc),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed approximant JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field} has {got} entries, expected {expected}")]
    Length {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Invalid(#[from] ApproxError),
}

fn split(c: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    (c.iter().map(|z| z.re).collect(), c.iter().map(|z| z.im).collect())
}

fn coefficient_doc(support: &[f64], c: &[Complex64]) -> CoefficientDoc {
    let (coeff_re, coeff_im) = split(c);
    CoefficientDoc {
        support: support.to_vec(),
        coeff_re,
        coeff_im,
    }
}

fn join(
    re: &[f64],
    im: &[f64],
    fields: (&'static str, &'static str),
    expected: usize,
) -> Result<Vec<Complex64>, LoadError> {
    for (field, v) in [(fields.0, re), (fields.1, im)] {
        if v.len() != expected {
            return Err(LoadError::Length {
                field,
                expected,
                got: v.len(),
            });
        }
    }
    Ok(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

impl From<&Approximant> for ApproximantDoc {
    fn from(a: &Approximant) -> Self {
        match a {
            Approximant::Interpolatory(r) => {
                ApproximantDoc::Interpolatory(coefficient_doc(r.support(), r.coefficients()))
            }
            Approximant::Cayley(r) if r.is_interpolatory() => {
                ApproximantDoc::Cayley(coefficient_doc(r.support(), r.coefficients()))
            }
            Approximant::Cayley(r) => {
                ApproximantDoc::CayleyNonInterpolatory(coefficient_doc(r.support(), r.coefficients()))
            }
            Approximant::NonInterpolatory(r) => {
                let (alpha_re, alpha_im) = split(r.alpha());
                let (beta_re, beta_im) = split(r.beta());
                ApproximantDoc::NonInterpolatory(PairDoc {
                    support: r.support().to_vec(),
                    alpha_re,
                    alpha_im,
                    beta_re,
                    beta_im,
                })
            }
        }
    }
}

impl TryFrom<ApproximantDoc> for Approximant {
    type Error = LoadError;

    fn try_from(doc: ApproximantDoc) -> Result<Self, LoadError> {
        let coeffs = |d: &CoefficientDoc| {
            join(&d.coeff_re, &d.coeff_im, ("coeff_re", "coeff_im"), d.support.len())
        };
        Ok(match doc {
            ApproximantDoc::Interpolatory(d) => {
                let w = coeffs(&d)?;
                BarycentricInterpolant::new(d.support, w)?.into()
            }
            ApproximantDoc::Cayley(d) => {
                let w = coeffs(&d)?;
                CayleyApproximant::interpolatory(d.support, w, CAYLEY_TOLERANCE)?.into()
            }
            ApproximantDoc::CayleyNonInterpolatory(d) => {
                let w = coeffs(&d)?;
                CayleyApproximant::non_interpolatory(d.support, w)?.into()
            }
            ApproximantDoc::NonInterpolatory(d) => {
                let m = d.support.len();
                let alpha = join(&d.alpha_re, &d.alpha_im, ("alpha_re", "alpha_im"), m)?;
                let beta = join(&d.beta_re, &d.beta_im, ("beta_re", "beta_im"), m)?;
                NonInterpolatoryApproximant::new(d.support, alpha, beta)?.into()
            }
        })
    }
}

pub fn approximant_to_json(a: &Approximant) -> String {
    serde_json::to_string_pretty(&ApproximantDoc::from(a)).expect("approximant serializes")
}

pub fn approximant_from_json(text: &str) -> Result<Approximant, LoadError> {
    let doc: ApproximantDoc = serde_json::from_str(text)?;
    doc.try_into()
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct NodeParseError {
    pub line: usize,
    pub message: String,
}

/// One real per line; `#` starts a comment, blank lines are skipped.
pub fn parse_nodes(text: &str) -> Result<Vec<f64>, NodeParseError> {
    let mut nodes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| NodeParseError {
            line: i + 1,
            message,
        };
        let x: f64 = body
            .parse()
            .map_err(|_| err(format!("not a number: '{body}'")))?;
        if !x.is_finite() {
            return Err(err(format!("non-finite node '{body}'")));
        }
        nodes.push(x);
    }
    Ok(nodes)
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "no file name"))?;
    let tmp = dir
        .unwrap_or_else(|| Path::new("."))
        .join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(contents)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}
