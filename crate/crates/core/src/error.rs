use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the set where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested evaluation falls outside the regime where the
    /// implementation meets its accuracy contract.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
