//! Tschirnhaus transformations that remove leading intermediate
//! coefficients, built from an obliteration solver for underdetermined
//! polynomial systems and explicit linear subspaces of quadrics and cubics.
//!
//! Every univariate equation solved along the way is recorded with its
//! degree, so a run produces a checkable [`pipeline::Certificate`].

pub mod error;
pub mod geometry;
pub mod multipoly;
pub mod numeric;
pub mod obliteration;
pub mod pipeline;
pub mod transform;

pub use error::{Error, Result};
pub use numeric::{Context, PrecisionConfig, Scalar, SolveLog, UniPoly};
