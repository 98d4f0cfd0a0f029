//! Floating bodies, illumination bodies and polar duality for centrally
//! symmetric polytopes in dimensions 2 to 4.
//!
//! The crate has two independent halves:
//!
//! * [`invariants`] evaluates the affine invariant `G(P)` in closed form from
//!   per-vertex cone-measure data (polar facets, Santaló points, volumes).
//! * [`oracles`] builds the floating body `P_δ`, the illumination body and the
//!   polar of the illumination body of the polar numerically, and measures the
//!   Banach–Mazur-type distance `d_P(δ)` whose normalized defect
//!   `(d_P(δ) - 1) / δ^{1/n}` tends to `G(P)`.
//!
//! [`geometry`] and [`duality`] are the shared substrate.

// NaN must fail range checks, so negated comparisons are intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod duality;
pub mod error;
pub mod geometry;
pub mod invariants;
mod numeric;
pub mod oracles;

pub use error::{Error, Result};
pub use geometry::{pt, Facet, HPolytope, Halfspace, Point, VPolytope};
