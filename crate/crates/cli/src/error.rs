//! Error taxonomy for the command-line tool.
//!
//! Everything a user can fix — bad flags, unreadable files, malformed scene
//! or data files, mismatched regions — is an input error (exit code 1).
//! A violated internal invariant, such as a coherence value escaping [0, 1]
//! beyond numerical slack, is an internal-consistency failure (exit code 2):
//! it signals a bug in the toolkit, not in the invocation.

use rcf_core::backprojection::BackprojectionError;
use rcf_core::coherence::CoherenceError;
use rcf_core::forward::ForwardError;
use rcf_core::geometry::GeometryError;
use rcf_core::metrics::MetricsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::Input(message.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ForwardError> for CliError {
    fn from(e: ForwardError) -> Self {
        match e {
            // A non-finite sample from a valid scene means the synthesis
            // itself broke its finiteness contract.
            ForwardError::NonFiniteSample { .. } => CliError::Internal(e.to_string()),
            ForwardError::Scene(inner) => CliError::Input(inner.to_string()),
        }
    }
}

impl From<BackprojectionError> for CliError {
    fn from(e: BackprojectionError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CoherenceError> for CliError {
    fn from(e: CoherenceError) -> Self {
        match e {
            CoherenceError::OutOfRange { .. } => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Input(e.to_string())
    }
}
