use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A request beyond a preallocated table.
    #[error("index {requested} exceeds the configured limit {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// `2g - 2 + n <= 0`: the moduli space is not a Deligne-Mumford stack.
    #[error("unstable moduli space: g = {genus}, n = {markings}")]
    Unstable { genus: u32, markings: usize },

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series has zero constant term")]
    Singular,

    /// Two independent computations of the same quantity disagreed.
    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
