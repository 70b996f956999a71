use thiserror::Error;

/// Errors raised by range computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (shape, finiteness, frame validity).
    #[error("invalid input: {0}")]
    Input(String),

    /// Operand shapes do not agree.
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },

    /// A mathematical hypothesis of the requested range is violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested point lies outside the set it should be realized in.
    #[error("point {0} lies outside the range (radius {1})")]
    OutOfRange(String, f64),

    /// An iterative method did not converge.
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
