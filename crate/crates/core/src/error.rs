use thiserror::Error;

use crate::graph::Edge;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },

    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("invalid edge {0:?}")]
    InvalidEdge(Edge),

    #[error("path {path}: {message}")]
    InvalidPath { path: usize, message: String },

    #[error("path {path}: pair ({u}, {v}) is not an edge of the graph")]
    NonEdge { path: usize, u: usize, v: usize },

    #[error("graph is not 2-degenerate")]
    NotTwoDegenerate,

    #[error("graph is not connected")]
    NotConnected,

    #[error("graph has {n} vertices, need at least {min}")]
    TooSmall { n: usize, min: usize },

    #[error("graph is not cubic")]
    NotCubic,

    #[error("maximum degree {0} exceeds 3")]
    DegreeTooLarge(usize),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("edge {0:?} lies in a triangle")]
    EdgeInTriangle(Edge),

    #[error("unsupported graph class: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("path system is not strongly separating: {0}")]
    NotSeparating(String),

    #[error("resource limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
