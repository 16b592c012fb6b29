use thiserror::Error;

/// Errors produced by the library layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: polynomial has {expected} variables, assignment has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("enumeration cap exceeded: {needed} variables, cap is {cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("matching edge cap exceeded: {edges} edges, cap is {cap}")]
    EdgeCapExceeded { edges: usize, cap: usize },

    #[error("polynomial is not symmetric; no weight-table path available")]
    NotSymmetric,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("distribution probabilities sum to {sum}, expected 1")]
    ProbabilityMass { sum: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
