use thiserror::Error;

/// Errors raised by the operators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A function evaluation returned a non-finite value.
    #[error("evaluation at {at} returned non-finite value {value}")]
    Evaluation { at: f64, value: f64 },

    /// The caller did not supply something the operation requires.
    #[error("contract error: {0}")]
    Contract(String),

    /// A mathematical hypothesis of the underlying result is violated.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A statistical or regression estimate could not be formed.
    #[error("estimation error: {0}")]
    Estimation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Returns `value` if finite, otherwise an evaluation error tagged with `at`.
pub(crate) fn finite(at: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation { at, value })
    }
}
