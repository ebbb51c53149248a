use thiserror::Error;

/// Errors raised by the statistical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatError {
    /// A runs test needs both outcome kinds and a nonzero null variance.
    #[error("degenerate sequence for runs test (makes={n1}, misses={n2})")]
    DegenerateSequence { n1: u64, n2: u64 },

    #[error("zero variance in input")]
    ZeroVariance,

    #[error("not enough observations: need {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
