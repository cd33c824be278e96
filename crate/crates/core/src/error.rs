use thiserror::Error;

use crate::subset::Subset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty subset has no decomposition")]
    EmptySubset,

    #[error("element {element} lies outside [1, {n}]")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("{element} is not a gap of {set}")]
    NotAGap { element: usize, set: Subset },

    #[error("expected a subset of size {expected}, got {set} (size {})", set.len())]
    WrongCardinality { expected: usize, set: Subset },

    #[error("subsets {0} and {1} are not disjoint")]
    NotDisjoint(Subset, Subset),

    #[error("ground set or dimension mismatch: {0}")]
    Mismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("inversion set not consistent: {0}")]
    InconsistentInversionSet(String),

    #[error("invalid cubillage: {0}")]
    InvalidCubillage(String),

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("enumeration exceeded the limit of {limit} {what}")]
    LimitExceeded { limit: u64, what: &'static str },

    #[error("cover relation contains a cycle through element {0}")]
    Cyclic(usize),

    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),

    #[error("not a cover: {0}")]
    NotACover(String),

    #[error("search exhausted without a solution: {0}")]
    SearchExhausted(String),

    #[error("exchange schedule breaks at step {step} ({from} -> {to}): {reason}")]
    ScheduleFailed { step: usize, from: Subset, to: Subset, reason: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed caller input rather than by a
    /// failed verification or an internal defect.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::EmptySubset
                | Error::ElementOutOfRange { .. }
                | Error::NotAGap { .. }
                | Error::WrongCardinality { .. }
                | Error::NotDisjoint(..)
                | Error::Mismatch(_)
                | Error::InvalidParameters(_)
                | Error::InconsistentInversionSet(_)
                | Error::InvalidCubillage(_)
                | Error::InvalidTriangulation(_)
                | Error::OutOfDomain(_)
                | Error::NotACover(_)
                | Error::Parse(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
