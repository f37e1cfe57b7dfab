//! Unitary barycentric rational approximation of `e^{ix}` on real nodes.

pub mod aaa;
pub mod barycentric;
pub mod cli;
pub mod diagnostics;
pub mod io;
pub mod lawson;
pub mod linalg;
pub mod loewner;
pub mod pade;

pub use aaa::{aaa_fit, AaaConfig, AaaFit, Variant};
pub use barycentric::Approximant;
pub use lawson::{lawson_fit, LawsonConfig};
