use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for building a domain error from a format string.
#[macro_export]
macro_rules! domain {
    ($($t:tt)*) => { $crate::error::Error::Domain(format!($($t)*)) };
}
