use thiserror::Error;

/// Errors raised by geometry, kernels, simulation and estimation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid or unsupported combination of inputs, detected before any work starts.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument lies outside the domain of a closed form.
    #[error("domain error: {0}")]
    Domain(String),

    /// A step was requested that crosses the last simulated time.
    #[error("scheduling error: step [{start}, {end}] crosses the simulation horizon {horizon}")]
    Scheduling { start: f64, end: f64, horizon: f64 },

    /// A finite-difference probe met a non-positive kernel value.
    #[error("non-positive kernel value {value} at finite-difference probe")]
    NonPositiveKernel { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
