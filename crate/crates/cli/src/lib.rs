//! Harness around the mining engine: declarative run configuration,
//! synthetic dataset generation with planted ground truth, result-file
//! comparison and scaling benchmarks. The `fier` binary is a thin layer
//! over this library.

pub mod bench;
pub mod compare;
pub mod config;
pub mod runner;
pub mod synth;

use thiserror::Error;

/// Harness errors, split by exit code: configuration problems exit with
/// 2, data problems with 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> CliError {
        CliError::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> CliError {
        CliError::Data(msg.into())
    }
}

impl From<fier_core::Error> for CliError {
    fn from(e: fier_core::Error) -> Self {
        match e {
            fier_core::Error::InvalidParams(msg) => CliError::Config(msg),
            other => CliError::Data(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
