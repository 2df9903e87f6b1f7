use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum LabError {
    /// A precondition or hypothesis of an operation was violated.
    #[error("usage error: {0}")]
    Usage(String),

    /// A configuration file or CLI parameter set could not be interpreted.
    #[error("config error: {0}")]
    Config(String),

    /// A numeric failure (non-finite value where a finite one is required).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub fn usage(msg: impl Into<String>) -> Self {
        LabError::Usage(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        LabError::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        LabError::Numeric(msg.into())
    }
}
