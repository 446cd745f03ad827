use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument outside the operation's precondition (n = 0, x < y, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter outside the range where the quantity is defined,
    /// e.g. a singular series evaluated at alpha <= 2/3.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request does not fit the configured sieve or enumeration budget.
    #[error("capacity exceeded: {what} needs {requested} but the limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// A numerical parameter that cannot give a meaningful answer
    /// (quadrature grid too coarse for the oscillation, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two routes that must agree did not.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("sieve cache {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
