use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A special function was evaluated outside `(0, ∞)`.
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An observation lies outside the support of its family.
    #[error("row {row}: {reason}")]
    Support { row: usize, reason: String },

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// The requested moment is not part of the closed-form catalog.
    #[error("moment catalog: {0}")]
    Catalog(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("need at least {needed} surviving replicates, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),
}
