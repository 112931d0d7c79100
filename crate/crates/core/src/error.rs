use thiserror::Error;

use crate::tree::VertexId;

/// Failures while building or querying a [`GeometricTree`](crate::GeometricTree).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("could not parse tree document: {0}")]
    Parse(String),
    #[error("input is not a tree: {0}")]
    NotATree(String),
    #[error("edge ({0}, {1}) has zero length")]
    ZeroLengthEdge(VertexId, VertexId),
    #[error("vertex id {0} appears more than once")]
    DuplicateVertexId(VertexId),
    #[error("({0}, {1}) is not an edge of the tree")]
    InvalidEdgeReference(VertexId, VertexId),
    #[error("lambda {0} is outside [0, 1]")]
    LambdaOutOfRange(f64),
}

/// Failures of the augmented-diameter evaluator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("shortcut endpoint is not on the tree: {0}")]
    PointsNotOnTree(#[from] TreeError),
}

/// Failures of the row-maxima search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SmawkError {
    #[error("matrix has no rows or no columns")]
    EmptyMatrix,
}

/// Failures of the balancing root finder.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum BalanceError {
    #[error("balance function keeps its sign on [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },
}

/// Failures of the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum OracleError {
    #[error("grid resolution {h} exceeds a quarter of the diameter {diameter}")]
    ResolutionTooCoarse { h: f64, diameter: f64 },
    #[error("grid resolution {0} must be positive and finite")]
    InvalidResolution(f64),
}
