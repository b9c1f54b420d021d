use thiserror::Error;

/// Errors raised by the simulator and experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A global state would exceed the configured amplitude cap.
    #[error("resource error: {needed} amplitudes requested, cap is {cap}")]
    Resource { needed: u128, cap: usize },

    /// The operation is not defined for this input (e.g. classical search with several marked items).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A cross-check between two computation routes disagreed.
    #[error("validation failed: {0}")]
    Validation(String),
}

impl SearchError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SearchError::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, SearchError>;
