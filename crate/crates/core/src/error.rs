use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("ord_{q}({g}) is undefined: gcd({g}, {q}) > 1")]
    UndefinedOrder { g: u64, q: u64 },

    #[error("{c} has no inverse modulo {q}")]
    NoInverse { c: i64, q: u64 },

    /// A hypothesis of the bound being checked does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The request would exceed an enumeration or memory cap.
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
