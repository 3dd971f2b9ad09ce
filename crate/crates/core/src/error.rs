//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Tensor shapes are inconsistent for the requested operation.
    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    ShapeMismatch {
        context: String,
        expected: String,
        actual: String,
    },

    /// An argument violates a documented precondition.
    #[error("{0}")]
    InvalidInput(String),

    /// A manifest file could not be parsed.
    #[error("{path}:{line}: {message}")]
    Manifest {
        path: String,
        line: usize,
        message: String,
    },

    /// An image payload could not be decoded.
    #[error("image decode failed: {0}")]
    ImageDecode(String),

    /// A checkpoint file is corrupt, truncated, or incompatible.
    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    /// Training produced a non-finite value.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand for a [`Error::ShapeMismatch`] with formatted shapes.
    pub fn shape(
        context: impl Into<String>,
        expected: impl std::fmt::Debug,
        actual: impl std::fmt::Debug,
    ) -> Self {
        Error::ShapeMismatch {
            context: context.into(),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }
}
