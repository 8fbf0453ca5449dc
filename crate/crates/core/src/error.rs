use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed arguments that make no sense for the operation.
    #[error("usage error: {0}")]
    Usage(String),

    /// An input document or matrix failed a structural or numeric invariant.
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Errors a caller can fix by changing their input, as opposed to numeric failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Usage(_) | Error::Validation { .. } | Error::Dimension { .. } | Error::Json(_)
        )
    }
}
