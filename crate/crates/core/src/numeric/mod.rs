//! Scalars, univariate polynomials, root finding and dense linear algebra.

mod config;
mod context;
mod gcd;
mod log;
mod matrix;
mod newton;
mod roots;
mod scalar;
mod unipoly;

pub use config::{default_tol, PrecisionConfig};
pub use context::Context;
pub use gcd::gcd_univariate;
pub use log::{SolveEntry, SolveLog};
pub use matrix::{hdot, hessenberg_eigenvalues, kernel_basis, normalize, orthonormalize, vec_norm, Matrix};
pub use newton::{newton_e_from_p, p_from_e};
pub use roots::{flatten, roots_univariate, Root};
pub use scalar::{real_log2_abs, real_to_f64, Real, Scalar};
pub use unipoly::UniPoly;
