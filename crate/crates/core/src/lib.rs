//! Exact tools for Gorenstein lattice polytopes.

pub mod cone;
pub mod corpus;
pub mod ehrhart;
pub mod error;
pub mod format;
pub mod gorenstein;
pub mod hull;
pub mod lifting;
pub mod linalg;
pub mod pipeline;
pub mod polytope;
pub mod report;
pub mod simplicial;
pub mod triangulation;

pub use error::{Error, ErrorKind, Result};
