use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A group spec string or a generator word failed to parse.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// A structural requirement on arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The group does not satisfy a hypothesis required by an experiment.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// A computation would exceed a hard memory/size guard.
    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    /// A factor kind is not supported by the requested operation.
    #[error("unsupported factor: {0}")]
    UnsupportedFactor(String),

    /// Not enough data for a statistical operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
