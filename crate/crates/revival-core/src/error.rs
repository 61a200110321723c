use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("exponential overflow in series term k = {k}")]
    Range { k: i64 },

    #[error("capacity exceeded: {requested} modes requested, limit is {limit}; increase hbar or alpha")]
    Capacity { requested: u64, limit: u64 },

    #[error("degenerate state at (q, p) = ({q}, {p}): inside the wall exclusion neighbourhood")]
    Degenerate { q: f64, p: f64 },

    #[error("evaluation method unavailable: {0}")]
    MethodUnavailable(&'static str),

    #[error("oracle did not converge: last estimates {previous} and {last}")]
    OracleFailure { previous: String, last: String },

    #[error("quadrature needs {suggested} nodes to resolve the phase, above the limit {limit}")]
    Accuracy { suggested: usize, limit: usize },

    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
