// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Failures of a CLI run, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<biq_core::Error> for CliError {
    fn from(e: biq_core::Error) -> Self {
        use biq_core::Error as E;
        match e {
            E::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            E::ParameterOutOfRange { .. }
            | E::RequiresQubits { .. }
            | E::UnequalLocalDims { .. }
            | E::DimensionMismatch(_)
            | E::DimensionTooLarge { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
