//! Mixed volumes of three-dimensional polytopes, the quantum-graph operator
//! behind Minkowski's quadratic inequality, and numerical certificates for
//! its equality cases.

pub mod arcs;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod graph;
pub mod lower_dim;
pub mod mixed;
pub mod quadrature;
pub mod rng;
pub mod suites;

pub use error::{Error, Result};
