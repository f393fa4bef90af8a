use thiserror::Error;

/// Errors raised by the simulator core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: `{field}` {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("index out of range: {0}")]
    Index(String),
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid preamble: {0}")]
    InvalidPreamble(String),
    #[error("threshold calibration failed: {0}")]
    Calibration(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
