use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An element index outside `0..order`.
    #[error("element index {index} out of range for group of order {order}")]
    InvalidElement { index: u64, order: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("could not parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    SizeCap { what: &'static str, size: u128, cap: u128 },

    /// A search or closure ran out of budget before completing.
    #[error("budget of {budget} exhausted during {what}")]
    Budget { what: &'static str, budget: u64 },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("automorphism acts on a group of order {aut_order}, expected {group_order}")]
    GroupMismatch { aut_order: usize, group_order: usize },

    /// A construction failed one of its own relation checks.
    #[error("construction of {name} failed relation `{relation}`")]
    Relation { name: String, relation: String },

    #[error("generator map does not extend to an automorphism: {0}")]
    Extension(#[from] crate::automorphisms::ExtensionFailure),

    #[error("structured enumeration disagrees with brute force: {0}")]
    CrossCheckMismatch(String),

    #[error("corrupt cache entry {path}: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }
}
