//! Crate-wide error type shared by solvers, the learner, and file loaders.

use thiserror::Error;

/// Unified error for every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value or argument violates an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A learner or environment configuration is inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// The instance exceeds the enumeration cap of an exhaustive solver.
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    /// A metered query or round budget ran out.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    /// Ground truth was requested from an environment that hides it.
    #[error("ground truth not available: {0}")]
    TruthUnavailable(String),

    /// A structural precondition does not hold for the given instance.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A text input failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// No sample satisfying the request exists.
    #[error("sampling failed: {0}")]
    Sampling(String),

    /// Underlying filesystem failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
