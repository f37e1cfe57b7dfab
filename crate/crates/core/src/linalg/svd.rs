//! One-sided Jacobi singular value decomposition.
//!
//! Real matrices are orthogonalized column by column (Hestenes). Complex
//! matrices go through the real embedding `[[Re A, -Im A], [Im A, Re A]]`,
//! whose spectrum is that of `A` with every value doubled; the duplicated
//! pairs are folded back into complex singular vectors.

use num_complex::Complex64;
use thiserror::Error;

use super::matrix::{dot_conj, norm2, ComplexMatrix, Matrix, RealMatrix, Scalar};

pub const DEFAULT_SWEEP_CAP: usize = 60;

/// Environment variable overriding the sweep cap.
pub const SWEEP_CAP_ENV: &str = "UNIRAT_SWEEP_CAP";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvdError {
    #[error("matrix has no rows or no columns ({rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Jacobi sweeps did not converge after {sweeps} sweeps (max relative off-diagonal {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SvdConfig {
    pub sweep_cap: usize,
}

impl Default for SvdConfig {
    fn default() -> Self {
        SvdConfig {
            sweep_cap: DEFAULT_SWEEP_CAP,
        }
    }
}

impl SvdConfig {
    /// Default configuration with the sweep cap taken from `UNIRAT_SWEEP_CAP` when set.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(SWEEP_CAP_ENV) {
            Ok(raw) => match raw.trim().parse::<usize>() {
                Ok(cap) if cap >= 1 => Ok(SvdConfig { sweep_cap: cap }),
                _ => Err(format!("{SWEEP_CAP_ENV} must be a positive integer, got {raw:?}")),
            },
            Err(_) => Ok(SvdConfig::default()),
        }
    }
}

/// Thin SVD `A V = U S`.
///
/// `singular_values` has one entry per column of `A`, in descending order.
/// `v` is square (`cols x cols`). `u` is `rows x cols`; its leading
/// `min(rows, cols)` columns are orthonormal and any trailing columns (only
/// present when `rows < cols`) are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult<T> {
    pub singular_values: Vec<f64>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> SvdResult<T> {
    /// Right singular vector for the smallest singular value.
    pub fn last_right_vector(&self) -> Vec<T> {
        self.v.column(self.v.cols() - 1)
    }

    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().expect("at least one column")
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values[0]
    }
}

pub fn svd_real(a: &RealMatrix) -> Result<SvdResult<f64>, SvdError> {
    svd_real_with(a, &SvdConfig::default())
}

pub fn svd_complex(a: &ComplexMatrix) -> Result<SvdResult<Complex64>, SvdError> {
    svd_complex_with(a, &SvdConfig::default())
}

pub fn svd_real_with(a: &RealMatrix, cfg: &SvdConfig) -> Result<SvdResult<f64>, SvdError> {
    check_input(a)?;
    let (rows, cols) = a.shape();
    let rot = jacobi(a, cfg.sweep_cap)?;
    let refined: Vec<f64> = rot.v.iter().map(|v| image_norm(a, v)).collect();
    let order = descending_order(&refined);

    let k = rows.min(cols);
    let mut sigma = Vec::with_capacity(cols);
    let mut u_cols = Vec::with_capacity(cols);
    let mut v_cols = Vec::with_capacity(cols);
    for (pos, &j) in order.iter().enumerate() {
        sigma.push(refined[j]);
        v_cols.push(rot.v[j].clone());
        let n = rot.norms[j];
        u_cols.push(if pos < k && n > f64::MIN_POSITIVE {
            rot.w[j].iter().map(|x| x / n).collect()
        } else {
            vec![0.0; rows]
        });
    }
    complete_left_basis(&mut u_cols, &sigma, k);
    normalize_signs(&mut v_cols, &mut u_cols);
    Ok(SvdResult {
        singular_values: sigma,
        u: Matrix::from_columns(rows, &u_cols),
        v: Matrix::from_columns(cols, &v_cols),
    })
}

pub fn svd_complex_with(
    a: &ComplexMatrix,
    cfg: &SvdConfig,
) -> Result<SvdResult<Complex64>, SvdError> {
    check_input(a)?;
    let (rows, cols) = a.shape();
    let embedded = real_embedding(a);
    let rot = jacobi(&embedded, cfg.sweep_cap)?;
    let order = descending_order(&rot.norms);
    let sigma_max = order.first().map_or(0.0, |&j| rot.norms[j]);
    let tol = 8.0 * f64::EPSILON * sigma_max;

    // Complex right vector z = p + iq for a real right vector [p; q], and
    // its image A z read off the rotated columns of the embedding.
    let right = |j: usize| -> Vec<Complex64> {
        (0..cols)
            .map(|i| Complex64::new(rot.v[j][i], rot.v[j][i + cols]))
            .collect()
    };
    let image = |j: usize| -> Vec<Complex64> {
        (0..rows)
            .map(|i| Complex64::new(rot.w[j][i], rot.w[j][i + rows]))
            .collect()
    };

    let mut zs: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    let mut ys: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    let mut start = 0;
    while start < order.len() {
        // Chain values within `tol`; an odd group absorbs its successor so
        // that each group spans whole complex directions.
        let mut end = start + 1;
        loop {
            while end < order.len() && rot.norms[order[end - 1]] - rot.norms[order[end]] <= tol {
                end += 1;
            }
            if (end - start) % 2 == 1 && end < order.len() {
                end += 1;
                continue;
            }
            break;
        }
        let group = &order[start..end];
        let want = group.len() / 2;
        let mut cands: Vec<(Vec<Complex64>, Vec<Complex64>)> =
            group.iter().map(|&j| (right(j), image(j))).collect();
        for _ in 0..want {
            // Pick the candidate with the largest component outside the span
            // already accepted; its partner i*z then has none.
            let mut best = 0;
            let mut best_norm = -1.0;
            for (c, (z, y)) in cands.iter_mut().enumerate() {
                for _ in 0..2 {
                    project_out(z, y, &zs, &ys);
                }
                let nz = norm2(z);
                if nz > best_norm {
                    best_norm = nz;
                    best = c;
                }
            }
            let (mut z, mut y) = cands.swap_remove(best);
            if best_norm > 0.0 {
                z.iter_mut().for_each(|x| *x /= best_norm);
                y.iter_mut().for_each(|x| *x /= best_norm);
            }
            zs.push(z);
            ys.push(y);
        }
        start = end;
    }

    let k = rows.min(cols);
    let mut entries: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = zs
        .into_iter()
        .zip(ys)
        .map(|(z, y)| (image_norm(a, &z), z, y))
        .collect();
    entries.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut sigma = Vec::with_capacity(cols);
    let mut u_cols = Vec::with_capacity(cols);
    let mut v_cols = Vec::with_capacity(cols);
    for (pos, (s, z, y)) in entries.into_iter().enumerate() {
        sigma.push(s);
        v_cols.push(z);
        let n = norm2(&y);
        u_cols.push(if pos < k && n > f64::MIN_POSITIVE {
            y.iter().map(|x| x / n).collect()
        } else {
            vec![Complex64::zero(); rows]
        });
    }
    // Images of small singular directions inherit the embedding's pairing
    // error scaled by sigma_1 / sigma; one Gram-Schmidt pass restores
    // orthonormality while moving sigma * u by O(eps sigma_1).
    for b in 0..k.min(u_cols.len()) {
        if sigma[b] <= f64::MIN_POSITIVE {
            continue;
        }
        let (done, rest) = u_cols.split_at_mut(b);
        let u = &mut rest[0];
        for _ in 0..2 {
            for (a, ua) in done.iter().enumerate() {
                if sigma[a] > f64::MIN_POSITIVE {
                    let c = dot_conj(ua, u);
                    u.iter_mut().zip(ua).for_each(|(x, &y)| *x -= c * y);
                }
            }
        }
        let n = norm2(u);
        u.iter_mut().for_each(|x| *x /= n);
    }
    complete_left_basis(&mut u_cols, &sigma, k);
    normalize_signs(&mut v_cols, &mut u_cols);
    Ok(SvdResult {
        singular_values: sigma,
        u: Matrix::from_columns(rows, &u_cols),
        v: Matrix::from_columns(cols, &v_cols),
    })
}

/// `|A v| / |v|` from the original matrix. The rotated columns carry
/// rounding from every rotation applied to them; this does not.
fn image_norm<T: Scalar>(a: &Matrix<T>, v: &[T]) -> f64 {
    let nv = norm2(v);
    if nv == 0.0 {
        return 0.0;
    }
    norm2(&a.mul_vec(v)) / nv
}

/// `[[Re A, -Im A], [Im A, Re A]]`.
pub fn real_embedding(a: &ComplexMatrix) -> RealMatrix {
    let (n, m) = a.shape();
    RealMatrix::from_fn(2 * n, 2 * m, |i, j| {
        let z = a[(i % n, j % m)];
        match (i < n, j < m) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

fn check_input<T: Scalar>(a: &Matrix<T>) -> Result<(), SvdError> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(SvdError::Empty {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if let Some((row, col)) = a.first_non_finite() {
        return Err(SvdError::NonFinite { row, col });
    }
    Ok(())
}

struct Rotated {
    /// Columns of `A V`.
    w: Vec<Vec<f64>>,
    /// Columns of `V`.
    v: Vec<Vec<f64>>,
    norms: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (p, q) in x.iter_mut().zip(y.iter_mut()) {
        let (a, b) = (*p, *q);
        *p = c * a - s * b;
        *q = s * a + c * b;
    }
}

fn jacobi(a: &RealMatrix, sweep_cap: usize) -> Result<Rotated, SvdError> {
    let (rows, cols) = a.shape();
    let mut w: Vec<Vec<f64>> = (0..cols).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    // Off-diagonal Gram entries below eps * sqrt(rows) relative to the column
    // norms are at rounding level for a dot product of that length.
    let tol = f64::EPSILON * (rows as f64).sqrt().max(1.0);

    let mut converged = cols < 2;
    let mut residual = 0.0_f64;
    for _ in 0..sweep_cap {
        if converged {
            break;
        }
        let mut rotated = false;
        residual = 0.0;
        // Squared column norms, refreshed every sweep and updated in place
        // after each rotation.
        let mut sq: Vec<f64> = w.iter().map(|c| dot(c, c)).collect();
        for p in 0..cols {
            for q in (p + 1)..cols {
                if sq[p] == 0.0 || sq[q] == 0.0 {
                    // Never skip a pair on a cached value.
                    sq[p] = dot(&w[p], &w[p]);
                    sq[q] = dot(&w[q], &w[q]);
                }
                let (alpha, beta) = (sq[p], sq[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                let off = gamma.abs() / (alpha.sqrt() * beta.sqrt());
                residual = residual.max(off);
                if off <= tol {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + hypot1(zeta));
                let c = 1.0 / hypot1(t);
                let s = c * t;
                sq[p] = (alpha - t * gamma).max(0.0);
                sq[q] = (beta + t * gamma).max(0.0);
                let (lo, hi) = w.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
                let (lo, hi) = v.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(SvdError::NoConvergence {
            sweeps: sweep_cap,
            residual,
        });
    }
    let norms = w.iter().map(|c| norm2(c)).collect();
    Ok(Rotated { w, v, norms })
}

/// `sqrt(1 + x^2)`.
fn hypot1(x: f64) -> f64 {
    if x.abs() < 1e150 {
        (1.0 + x * x).sqrt()
    } else {
        x.abs()
    }
}

/// Indices sorting `values` descending; ties keep the lower index first.
fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx
}

/// Removes the components of `z` along the accepted right vectors, applying
/// the same combination to its image `y`.
fn project_out(
    z: &mut [Complex64],
    y: &mut [Complex64],
    zs: &[Vec<Complex64>],
    ys: &[Vec<Complex64>],
) {
    for (za, ya) in zs.iter().zip(ys) {
        let c = dot_conj(za, z);
        for (zi, &a) in z.iter_mut().zip(za) {
            *zi -= c * a;
        }
        for (yi, &a) in y.iter_mut().zip(ya) {
            *yi -= c * a;
        }
    }
}

/// Fills the zero columns among the leading `k` left vectors with unit
/// vectors orthogonal to the rest.
fn complete_left_basis<T: Scalar>(u_cols: &mut [Vec<T>], sigma: &[f64], k: usize) {
    let rows = u_cols.first().map_or(0, Vec::len);
    for j in 0..k {
        if sigma[j] > f64::MIN_POSITIVE {
            continue;
        }
        for e in 0..rows {
            let mut cand: Vec<T> = (0..rows)
                .map(|i| if i == e { T::one() } else { T::zero() })
                .collect();
            for _ in 0..2 {
                for (jj, other) in u_cols.iter().enumerate().take(k) {
                    if jj == j || norm2(other) == 0.0 {
                        continue;
                    }
                    let c = dot_conj(other, &cand);
                    for (x, &o) in cand.iter_mut().zip(other) {
                        *x = *x - c * o;
                    }
                }
            }
            let n = norm2(&cand);
            if n > 0.5 {
                u_cols[j] = cand.iter().map(|&x| x * T::from_real(1.0 / n)).collect();
                break;
            }
        }
    }
}

/// Makes the largest-modulus entry of every right vector real and
/// nonnegative, rotating the matching left vector alike.
fn normalize_signs<T: Scalar + PhaseOf>(v_cols: &mut [Vec<T>], u_cols: &mut [Vec<T>]) {
    for (v, u) in v_cols.iter_mut().zip(u_cols.iter_mut()) {
        let mut best = 0;
        let mut best_mod = -1.0;
        for (i, x) in v.iter().enumerate() {
            let m = x.modulus();
            if m > best_mod {
                best_mod = m;
                best = i;
            }
        }
        if best_mod <= 0.0 {
            continue;
        }
        let phase = v[best].unit_conj_phase();
        if phase == T::one() {
            continue;
        }
        v.iter_mut().for_each(|x| *x = *x * phase);
        u.iter_mut().for_each(|x| *x = *x * phase);
        // Pin the pivot exactly onto the nonnegative real axis.
        v[best] = T::from_real(v[best].modulus());
    }
}

trait PhaseOf {
    /// `conj(x) / |x|`.
    fn unit_conj_phase(self) -> Self;
}

impl PhaseOf for f64 {
    fn unit_conj_phase(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

impl PhaseOf for Complex64 {
    fn unit_conj_phase(self) -> Self {
        if self.im == 0.0 && self.re >= 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let r = self.norm();
        Complex64::new(self.re / r, -self.im / r)
    }
}
