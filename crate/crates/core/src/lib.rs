//! Exact analysis of the Voronoi cell at the origin.
//!
//! Given a generator `P` containing the origin (a finite point list or one
//! of the built-in infinite families), the crate builds the half-space
//! representation of the doubled cell, the convex reciprocal
//! `C = conv(inv(P \ {0}) ∪ {0})`, the direction cone `D = pos(P)` and its
//! polar, and issues certified verdicts on polyhedrality and boundedness.
//! All predicates use exact rational arithmetic.

pub mod cell;
pub mod delaunay;
pub mod dircone;
pub mod error;
pub mod generators;
pub mod kernel;
pub mod reciprocal;
pub mod report;
pub mod svg;
pub mod verdict;

pub use error::{Error, Result};
