use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input text (edge lists, certificates, vertex maps).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A vertex index outside 0..n-1.
    #[error("vertex index {index} out of range (order {order})")]
    IndexOutOfRange { index: usize, order: usize },

    /// Operation requires a connected graph.
    #[error("graph is disconnected")]
    Disconnected,

    /// Argument violates a stated precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configured search cap would be exceeded.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// Operation requires a solvable distribution.
    #[error("distribution is not solvable")]
    Unsolvable,

    /// Certificate does not belong to the supplied graph.
    #[error("certificate fingerprint does not match graph ({0})")]
    FingerprintMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
