use thiserror::Error;

/// Errors raised by every operation in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid-input: {0}")]
    InvalidInput(String),

    #[error("unsupported-graph: {0}")]
    UnsupportedGraph(String),

    #[error("unsupported-region: {0}")]
    UnsupportedRegion(String),

    #[error("precondition: {0}")]
    Precondition(String),

    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),

    #[error("nothing-to-fold: graph is stiff")]
    NothingToFold,

    #[error("range-too-large: range {range} on the outer sphere exceeds 2k = {bound}")]
    RangeTooLarge { range: usize, bound: usize },

    #[error("parity: {0}")]
    Parity(String),

    #[error("resource-limit: {what} (limit {limit}, reached {reached})")]
    ResourceLimit {
        what: String,
        limit: usize,
        reached: usize,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures caused by size limits rather than by bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
