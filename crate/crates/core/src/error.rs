use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input: bad JSON, bad indices, utilities that do not sum to 1.
    #[error("invalid input: {0}")]
    Input(String),
    /// A solver was asked to run on a graph class or problem it does not handle.
    #[error("routing error: {0}")]
    Routing(String),
    /// The brute-force oracle refused an instance larger than its budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A solver produced a result that failed its own post-condition.
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn routing_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Routing(msg.into()))
}
