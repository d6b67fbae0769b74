use core::fmt;

use crate::graph::VertexId;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyGraph,
    /// Vertex labels must be positive integers.
    InvalidLabel(VertexId),
    DuplicateVertex(VertexId),
    DuplicateEdge(VertexId, VertexId),
    SelfLoop(VertexId),
    UnknownVertex(VertexId),
    /// The graph is not connected; analysis operations require connectivity.
    Disconnected,
    UnknownDirectedEdge(VertexId, VertexId),
    InvalidSubgraph(&'static str),
    /// Two fields (or a field and an operator) live on different graphs.
    GraphMismatch,
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    NotMeanZero {
        sum: f64,
    },
    MissingPole,
    InvalidWalk(&'static str),
    NotATrail,
    CycleLimitExceeded {
        limit: usize,
    },
    NotOrthonormal {
        residual: f64,
    },
    RhsNotOrthogonal {
        residual: f64,
    },
    SingularBeyondDeflation,
    CompositionNotZero {
        norm: f64,
    },
    NonPositiveStep,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyGraph => write!(f, "graph has no vertices"),
            Error::InvalidLabel(v) => write!(f, "vertex label {v} is not a positive integer"),
            Error::DuplicateVertex(v) => write!(f, "vertex {v} declared twice"),
            Error::DuplicateEdge(a, b) => write!(f, "edge {{{a},{b}}} declared twice"),
            Error::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            Error::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            Error::Disconnected => write!(f, "graph is not connected"),
            Error::UnknownDirectedEdge(a, b) => write!(f, "unknown directed edge {a}->{b}"),
            Error::InvalidSubgraph(why) => write!(f, "invalid subgraph: {why}"),
            Error::GraphMismatch => write!(f, "operands live on different graphs"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotMeanZero { sum } => write!(f, "function is not mean-zero (sum = {sum:e})"),
            Error::MissingPole => write!(f, "Green's third identity needs a pole"),
            Error::InvalidWalk(why) => write!(f, "invalid walk: {why}"),
            Error::NotATrail => write!(f, "walk repeats an edge"),
            Error::CycleLimitExceeded { limit } => {
                write!(f, "more than {limit} simple cycles")
            }
            Error::NotOrthonormal { residual } => {
                write!(f, "basis is not orthonormal (residual {residual:e})")
            }
            Error::RhsNotOrthogonal { residual } => {
                write!(f, "right-hand side not orthogonal to deflation set (residual {residual:e})")
            }
            Error::SingularBeyondDeflation => {
                write!(f, "matrix is singular beyond the deflated subspace")
            }
            Error::CompositionNotZero { norm } => write!(f, "g∘f is not zero (norm {norm:e})"),
            Error::NonPositiveStep => write!(f, "time step must be positive"),
        }
    }
}

impl core::error::Error for Error {}
