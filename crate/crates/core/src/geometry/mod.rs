//! Exact low-dimensional polytope kernel (n in {2, 3, 4}).
//!
//! Everything here is pure: polytopes are immutable once built and every
//! query is a function of its inputs.

mod cell;
pub(crate) mod hull;
pub(crate) mod linalg;
mod polytope;

use nalgebra::DVector;

pub use cell::Facet;
pub use polytope::{HPolytope, Halfspace, PolytopeFile, VPolytope};

/// A point or direction in R^n.
pub type Point = DVector<f64>;

/// Incidence tolerance used when none is given.
pub const DEFAULT_INCIDENCE_TOL: f64 = 1e-9;

/// Shorthand for building a point from a slice.
pub fn pt(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}
