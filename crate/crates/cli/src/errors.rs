//! CLI failure channel with stable exit codes.
//!
//! Every failure maps to one of three kinds: configuration problems (exit
//! 2), input-data problems (exit 3), and violated acceptance thresholds in
//! experiment suites (exit 4). Each is reported as a JSON error object on
//! stderr so callers can parse outcomes mechanically.

use thiserror::Error;

/// A CLI failure, carrying its exit code and machine-readable kind.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config keys, environment values, or model parameters.
    #[error("{0}")]
    Config(String),
    /// Unreadable, malformed, too-short, or degenerate input data.
    #[error("{0}")]
    Data(String),
    /// A configured experiment threshold was not met.
    #[error("{0}")]
    Threshold(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Threshold(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Data(_) => "data",
            CliError::Threshold(_) => "threshold",
        }
    }
}

impl From<periomax_core::Error> for CliError {
    fn from(e: periomax_core::Error) -> Self {
        use periomax_core::Error as E;
        match &e {
            E::InvalidArgument(_) | E::InsufficientProfile(_) => CliError::Config(e.to_string()),
            E::InvalidLength { .. }
            | E::InvalidData(_)
            | E::DegenerateData(_)
            | E::ShapeMismatch(_) => CliError::Data(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
