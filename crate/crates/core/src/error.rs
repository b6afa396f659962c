use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation accepts.
    #[error("input domain error: {0}")]
    InputDomain(String),

    /// Two routes that must agree did not; signals an assembly bug or a
    /// numerically broken input.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// A closed-form expression hit a genuine singularity.
    #[error("singularity: {0}")]
    Singularity(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::InputDomain(msg.into())
}

pub(crate) fn consistency(msg: impl Into<String>) -> Error {
    Error::Consistency(msg.into())
}
