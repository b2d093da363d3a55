use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must share a size do not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested computation exceeds the configured work budget.
    #[error("resource limit exceeded: {what} needs {needed} units, limit is {limit}")]
    ResourceLimit {
        what: String,
        needed: u128,
        limit: u64,
    },

    /// An internal identity that must hold exactly failed to hold.
    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}
