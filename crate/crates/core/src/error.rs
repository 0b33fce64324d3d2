use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (shape, Hermitian symmetry, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The input is valid but the requested object does not exist for it
    /// (e.g. the null space of a zero vector).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unsupported order: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// An iterative method failed to reach its tolerance.
    #[error("numeric failure: {message}")]
    Numeric { message: String, trace: Vec<String> },
}

impl Error {
    pub(crate) fn numeric(message: impl Into<String>) -> Self {
        Error::Numeric {
            message: message.into(),
            trace: Vec::new(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
