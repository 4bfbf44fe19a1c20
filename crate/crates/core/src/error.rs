use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument: nonpositive radius, dimension mismatch, malformed spec.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine did not reach its target.
    #[error("numerical error: {message} (achieved error estimate {estimate:.3e})")]
    Numerical { message: String, estimate: f64 },

    /// Cholesky factorization failed even at the largest jitter.
    #[error("factorization failed at leading minor {minor} (jitter {jitter:.3e})")]
    Factorization { minor: usize, jitter: f64 },

    /// An input violated an operation's precondition.
    #[error("precondition violated: {message}")]
    Precondition { message: String, index: Option<usize> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>, index: Option<usize>) -> Self {
        Error::Precondition {
            message: msg.into(),
            index,
        }
    }
}
