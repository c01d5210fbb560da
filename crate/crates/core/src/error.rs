//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration or parameter value (maps to CLI exit code 2).
    #[error("config: {0}")]
    Config(String),
    /// Mesh/geometry construction failure.
    #[error("grid: {0}")]
    Grid(String),
    /// Sparse matrix construction or indexing failure.
    #[error("sparse: {0}")]
    Sparse(String),
    /// Matrix is structurally or numerically singular.
    #[error("singular system: {0}")]
    Singular(String),
    /// Numerical failure during a run (maps to CLI exit code 3).
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
