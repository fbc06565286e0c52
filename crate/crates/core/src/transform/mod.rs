//! Applying a Tschirnhaus transformation `y = T(x)` to the roots of `p`.

mod engine;
mod functional;
mod poly;
mod recover;

pub use engine::{
    companion_matrix, leading_coefficients, leading_via_companion, relative_residuals, transform, transform_matrix,
    transform_via_companion, QuotientRing,
};
pub use functional::{coefficient_functional, CoefficientFunctional};
pub use poly::{MonicPoly, Transformation};
pub use recover::recover_roots;
