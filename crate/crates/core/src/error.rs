use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A caller broke a documented precondition.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("resource limit: {what} is {actual}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    /// The fact source contradicts itself. Carries the rendered derivations of
    /// both sides of the conflict.
    #[error("inconsistent input on {atom}: {}", traces.join(" / "))]
    Inconsistent { atom: String, traces: Vec<String> },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
