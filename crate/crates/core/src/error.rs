use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A graph, coloring or partition file could not be parsed.
    #[error("malformed {what}: {msg}")]
    Format { what: &'static str, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An exhaustive check ran out of budget before reaching a verdict.
    #[error("search budget exhausted while {0}")]
    BudgetExhausted(String),

    /// The switching repair could not find a usable edge.
    #[error("degree repair failed: {0}")]
    RepairFailed(String),

    /// A builder precondition does not hold on the supplied instance.
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// A greedy construction got stuck.
    #[error("construction failed: {0}")]
    Construction(String),

    /// Refusal to enumerate an instance above a size guard.
    #[error("{what} count {count} exceeds the limit {limit}")]
    GuardExceeded {
        what: &'static str,
        count: u64,
        limit: u64,
    },

    /// A formula was queried outside the regime where it is known to hold.
    #[error("unsupported regime: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
