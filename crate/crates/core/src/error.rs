use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was attempted in a phase or state that forbids it.
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    /// A pair or bit index outside the register/string bounds.
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    /// An attack strategy tried to query past its oracle budget.
    #[error("query budget exceeded: {0} queries allowed")]
    QueryBudgetExceeded(u64),

    /// A capability-gated device operation was attempted by the wrong role.
    #[error("access denied: {0}")]
    AccessDenied(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn violation(msg: impl Into<String>) -> Self {
        Error::ProtocolViolation(msg.into())
    }
}
