use thiserror::Error;

use crate::vector::DenseVector;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {found} ({context})")]
    Dimension {
        expected: usize,
        found: usize,
        context: String,
    },

    #[error("validation failed at `{field}`: {message}")]
    Validation { field: String, message: String },

    /// An iterative routine stopped without meeting its tolerance. The best
    /// iterate found so far is carried along so callers can still inspect it.
    #[error("numerical failure in {routine}: {message} (residual {residual:e})")]
    Numerical {
        routine: String,
        message: String,
        residual: f64,
        best: Option<DenseVector>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(expected: usize, found: usize, context: impl Into<String>) -> Self {
        Error::Dimension {
            expected,
            found,
            context: context.into(),
        }
    }

    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn numerical(
        routine: impl Into<String>,
        message: impl Into<String>,
        residual: f64,
        best: Option<DenseVector>,
    ) -> Self {
        Error::Numerical {
            routine: routine.into(),
            message: message.into(),
            residual,
            best,
        }
    }
}
