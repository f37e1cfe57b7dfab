//! Dense complex/real matrices and the Jacobi SVD kernel.

mod matrix;
mod svd;

pub use matrix::{dot_conj, norm2, ComplexMatrix, Matrix, RealMatrix, Scalar};
pub use svd::{
    real_embedding, svd_complex, svd_complex_with, svd_real, svd_real_with, SvdConfig, SvdError,
    SvdResult, DEFAULT_SWEEP_CAP, SWEEP_CAP_ENV,
};

pub use num_complex::Complex64;

/// `e^{i theta}`.
pub fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}
