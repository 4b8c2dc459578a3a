use thiserror::Error;

/// Errors raised by the rate computations and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a closed-form expression.
    #[error("domain error: {0}")]
    Domain(String),
    /// A distribution, channel, or parameter set failed validation.
    #[error("validation error: {0}")]
    Validation(String),
    /// An exact enumeration would exceed the configured work budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
