use thiserror::Error;

use crate::topology::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("universe has {0} points, at most {max} are supported", max = crate::MAX_POINTS)]
    UniverseTooLarge(usize),

    #[error("operands belong to different contexts")]
    ContextMismatch,

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("unknown parameter `{0}`")]
    UnknownParam(String),

    #[error("malformed soft set: {0}")]
    MalformedSet(String),

    #[error("intersection of an empty family is undefined")]
    EmptyFamily,

    #[error("subspace carrier must be non-empty")]
    EmptyCarrier,

    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("open set #{0} duplicates an earlier open set")]
    DuplicateOpen(usize),

    #[error("not a soft topology ({} violation(s))", .0.len())]
    InvalidTopology(Vec<Violation>),

    #[error("family is not a soft basis of the target topology")]
    NotABasis,

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("malformed document: {0}")]
    Document(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::UniverseTooLarge(_))
    }
}
