//! Symbolic exterior calculus: differential forms, Hodge duality, connections
//! with torsion, curvature, degenerate transformations, and executable checks
//! that field equations reduce to closed forms of a given degree.

pub mod catalog;
pub mod cli;
pub mod connection;
pub mod error;
pub mod exterior;
pub mod geometry;
pub mod symbolic;
pub mod transform;

pub use error::{Error, Result};
