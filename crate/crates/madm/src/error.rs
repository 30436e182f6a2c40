use thiserror::Error;

/// Errors produced by model construction, simulation, and the numerical
/// evaluators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("kernel denominator too small (|den| = {modulus:.3e})")]
    SingularKernel { modulus: f64 },

    #[error("{kind} residual {value:.3e} exceeds limit {limit:.3e}")]
    ResidualTooLarge {
        kind: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("master-equation window leak {leak:.3e} exceeds limit {limit:.3e}")]
    WindowLeak { leak: f64, limit: f64 },

    #[error("event budget exceeded ({limit} events in one replica)")]
    EventBudgetExceeded { limit: u64 },

    #[error("did not converge: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
