use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants split into two families: bad or unsuitable input
/// ([`ErrorKind::Input`]) and failed internal verifications
/// ([`ErrorKind::Internal`]). The latter guard properties that the
/// underlying theory guarantees, so they always indicate a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no primitive representative")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty point set")]
    Empty,

    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),

    #[error("point {0} is not a vertex of the convex hull")]
    NotAVertex(String),

    #[error("not a cone element: {0}")]
    NotInCone(String),

    #[error("vector {0} is not in the lattice of the linear span")]
    NotInLattice(String),

    #[error("cone is not pointed")]
    NotPointed,

    #[error("generators do not span the ambient space")]
    Degenerate,

    #[error("polytope is not Gorenstein")]
    NotGorenstein,

    #[error("polytope is not integrally closed (witness {0})")]
    NotIntegrallyClosed(String),

    #[error("Gorenstein point not degree-1 decomposable")]
    NotDecomposable,

    #[error("simplicial complex is not pure")]
    NotPure,

    #[error("g-vector undefined without symmetry")]
    NotSymmetric,

    #[error("subdivision is not a triangulation: cell {0}")]
    NotTriangulation(String),

    #[error("cell {0} is not unimodular")]
    NotUnimodular(String),

    #[error("weights are degenerate: {0}")]
    DegenerateWeights(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("series not polynomial-divisible")]
    SeriesNotDivisible,

    #[error("apex degenerate; lower the apex and retry ({0})")]
    ApexDegenerate(String),

    #[error("induced subdivision differs from the expected triangulation at cell {0}")]
    SubdivisionMismatch(String),

    #[error("verification '{check}' failed: {detail}")]
    Verification { check: String, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotDecomposable
            | Error::SeriesNotDivisible
            | Error::ApexDegenerate(_)
            | Error::SubdivisionMismatch(_)
            | Error::Verification { .. } => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn verification(check: &str, detail: impl Into<String>) -> Self {
        Error::Verification { check: check.to_string(), detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
