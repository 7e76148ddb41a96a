use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on the arithmetic context or an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// A denominator vanished (or the value overflowed) at the requested point.
    #[error("pole: {0}")]
    Pole(String),
    /// A series was asked to sum without any terminating parameter.
    #[error("series does not terminate: {0}")]
    NonTerminating(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn pole<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Pole(msg.into()))
}
