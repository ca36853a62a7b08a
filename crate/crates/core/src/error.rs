use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured memory or size limit would be exceeded.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// The requested accuracy could not be certified.
    #[error("precision error: {0}")]
    Precision(String),
    /// An internal certification check failed.
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("root finding failed: {0}")]
    Bracket(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
