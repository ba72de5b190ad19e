use thiserror::Error;

/// Errors raised by the library.
///
/// `Validation` means the input itself is malformed; every other variant is a
/// refusal to compute on an otherwise well-formed input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("{what} is {actual}, which exceeds the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dynamic-programming table needs {cells} cells, budget is {budget}")]
    TableBudget { cells: u128, budget: u128 },

    #[error("conditioning event has probability zero")]
    ZeroProbabilityEvent,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for malformed input, false for computational refusals.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
