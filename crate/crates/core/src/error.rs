use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("index {index} out of range (alphabet size {size})")]
    IndexOutOfRange { index: i64, size: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid combinatorial map: {0}")]
    InvalidMap(String),

    #[error("not a covering: {0}")]
    NotCovering(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid cochain: {0}")]
    InvalidCochain(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is not regular: {0}")]
    NotRegular(String),

    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
