use std::path::PathBuf;

use thiserror::Error;

use crate::lp::LpError;

/// Errors produced by the transport, relaxation, and clustering routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("transport plan violates its marginals: {0}")]
    InfeasiblePlan(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("problem too large: N = {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("linear program: {0}")]
    Lp(#[from] LpError),

    #[error("solver did not reach optimality: {0}")]
    SolverFailed(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
