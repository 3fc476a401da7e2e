use thiserror::Error;

use crate::label::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("{family} of dimension {dimension} has too many nodes (cap is {cap})")]
    TooLarge {
        family: Family,
        dimension: u32,
        cap: u64,
    },

    #[error("malformed label: {0}")]
    MalformedLabel(String),

    #[error("unknown topology family `{0}`")]
    UnknownFamily(String),

    #[error("node {0} is not part of the graph")]
    UnknownNode(String),

    #[error("operation requires family {expected}, got {actual}")]
    UnsupportedFamily { expected: Family, actual: Family },

    #[error("construction produced a disconnected graph with {} components", .components.len())]
    Disconnected { components: Vec<Vec<String>> },

    #[error("invalid graph document: {0}")]
    InvalidDocument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}
