use thiserror::Error;

use crate::group::GroupElement;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands belong to different groups")]
    MixedGroups,

    #[error("{0}")]
    Usage(String),

    #[error("set would hold {size} elements, above the cap of {cap}")]
    TooLarge { size: u128, cap: u128 },

    #[error("free groups are not amenable and admit no Følner windows")]
    NonAmenableGroup,

    #[error("patterns disagree at {0}")]
    Conflict(GroupElement),

    #[error("search budget of {limit} nodes exhausted after {used} nodes ({progress})")]
    Budget {
        limit: u64,
        used: u64,
        progress: String,
    },

    #[error("invalid subshift: {0}")]
    InvalidSpec(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("the subshift is empty; entropy is undefined")]
    EntropyUndefined,

    #[error("certificate rejected: {0}")]
    Rejected(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidSpec(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
