//! Sparse homogeneous multivariate polynomials, linear substitution,
//! black-box interpolation and bivariate resultants.

mod interpolate;
mod poly;
mod resultant;
mod substitute;

pub use interpolate::interpolate_homogeneous;
pub use poly::MultiPoly;
pub use resultant::{resultant_bivariate, BiPoly};
pub use substitute::LinearMap;
