//! Error taxonomy shared by every module in this crate.

/// Unified error type for construction, validation, and computation failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Series or buffer shorter than the operation requires.
    #[error("invalid length: need at least {min}, got {got}")]
    InvalidLength { got: usize, min: usize },

    /// Input values outside the operation's domain (NaN, infinity, wrong sign).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// Parameter outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input is formally valid but carries no usable signal (e.g. zero variance).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Two containers that must share a grid or length do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A dependence profile does not reach far enough for the requested tail.
    #[error("insufficient profile: {0}")]
    InsufficientProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
