// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the numerical kernels, channel constructors and estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {rows}x{cols} exceeds the supported maximum of {max}x{max}")]
    DimensionTooLarge { rows: usize, cols: usize, max: usize },

    #[error("matrix is not Hermitian (anti-Hermitian residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("eigenvalue {value:.3e} is below the clipping threshold; input is not positive semidefinite")]
    NegativeEigenvalue { value: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("parameter `{name}` = {value} outside {range}")]
    ParameterOutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("operation requires equal local dimensions, got dA={da}, dB={db}")]
    UnequalLocalDims { da: usize, db: usize },

    #[error("operation is defined for two qubits only, got dA={da}, dB={db}")]
    RequiresQubits { da: usize, db: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("channel JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical kernels rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
