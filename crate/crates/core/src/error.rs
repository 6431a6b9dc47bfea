//! Error types shared across the crate.

use thiserror::Error;

/// Construction errors for [`crate::Grid`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("axis {axis}: upper bound {hi} must exceed lower bound {lo}")]
    BadBounds { axis: usize, lo: f64, hi: f64 },
    #[error("spacing must be positive and finite, got {0}")]
    BadSpacing(f64),
    #[error("axis {axis}: extent {extent} is not an integer multiple of h = {h} (remainder {rem:e})")]
    NonDivisibleExtent {
        axis: usize,
        extent: f64,
        h: f64,
        rem: f64,
    },
    #[error("axis {axis}: need at least 3 nodes, got {nodes}")]
    TooFewNodes { axis: usize, nodes: usize },
    #[error("dimension must be 1 or 2, got {0}")]
    BadDimension(usize),
}

/// Errors raised by field construction and pointwise field queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("sampled value at node {index} ({x}, {y}) is not finite")]
    NonFiniteSample { index: usize, x: f64, y: f64 },
    #[error("node {0} is not strictly interior")]
    BoundaryNode(usize),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("no grid node inside ball centered ({x}, {y}) with radius {radius}")]
    EmptyBall { x: f64, y: f64, radius: f64 },
    #[error("field minimum {min:e} is below -{tol:e}: nonnegativity hypothesis violated")]
    NegativityViolation { min: f64, tol: f64 },
}

/// Errors raised by the Dirichlet solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("obstacle boundary data must be nonnegative; found {value} at node {index}")]
    NegativeBoundary { index: usize, value: f64 },
    #[error("invalid solver parameter: {0}")]
    BadParams(String),
}

impl From<FieldError> for OperatorError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::GridMismatch => OperatorError::GridMismatch,
            other => OperatorError::BadParams(other.to_string()),
        }
    }
}
