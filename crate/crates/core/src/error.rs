use thiserror::Error;

/// Errors raised by the algebra, the finite-sum evaluators and the campaigns.
#[derive(Debug, Error)]
pub enum Error {
    /// An operand lies outside the domain of the operation (e.g. a word not in H¹).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A brute-force enumeration was refused because it exceeds the configured caps.
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
