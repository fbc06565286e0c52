//! Sylvester's obliteration: degree-profile bounds and the recursive point
//! and line solver for underdetermined homogeneous systems.

mod bounds;
mod form;
mod solver;

pub use bounds::{existence_bound_k_plane, line_bound, point_bound, DegreeProfile};
pub use form::{Equation, Form};
pub use solver::{derived_system, find_line, find_point, line_certified, PolySystem, ProjLine, ProjPoint};
#[allow(unused_imports)]
pub(crate) use solver::{line_rec, meet_line, point_rec, SLACK};

pub use crate::numeric::SolveLog;
