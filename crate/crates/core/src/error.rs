use thiserror::Error;

/// Errors produced while configuring, assembling or solving a discrete problem.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("index {index:?} is not an unknown of the grid")]
    OutOfRange { index: Vec<isize> },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("solver breakdown: |{scalar}| = {value:e} fell below 1e-300")]
    Breakdown { scalar: &'static str, value: f64 },

    #[error("solver did not converge in {iterations} iterations (residual {residual:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        /// Best iterate seen, stored as f64 regardless of the working precision.
        best: Vec<f64>,
    },

    #[error("matrix is singular to working precision (pivot column {column})")]
    Singular { column: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
