// SPDX-License-Identifier: Apache-2.0

//! Validity checks for density matrices and pure states.

use crate::eig::{hermitian_eigenvalues, CLIP_TOL};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Tolerance on trace and Hermiticity of input states.
pub const STATE_TOL: f64 = 1e-10;

/// Checks that `rho` is a `dim×dim` density matrix: Hermitian, unit trace and PSD, each within 1e-10.
pub fn check_density_matrix(rho: &ComplexMatrix, dim: usize) -> Result<()> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected a {dim}x{dim} density matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let herm = rho.hermitian_residual();
    if herm > STATE_TOL {
        return Err(Error::InvalidState(format!("anti-Hermitian residual {herm:.3e}")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let min = hermitian_eigenvalues(rho)?.last().copied().unwrap_or(0.0);
    if min < -CLIP_TOL {
        return Err(Error::InvalidState(format!("minimum eigenvalue {min:.3e} is negative")));
    }
    Ok(())
}

/// Checks that `psi` is a unit-norm column vector of length `dim`.
pub fn check_pure_state(psi: &ComplexMatrix, dim: usize) -> Result<()> {
    if psi.rows() != dim || psi.cols() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a column vector of length {dim}, got {}x{}",
            psi.rows(),
            psi.cols()
        )));
    }
    let norm = psi.vector_norm();
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("state norm {norm} differs from 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn accepts_maximally_mixed() {
        let rho = ComplexMatrix::identity(4).scale_real(0.25);
        check_density_matrix(&rho, 4).unwrap();
    }

    #[test]
    fn rejects_bad_states() {
        let rho = ComplexMatrix::identity(4).scale_real(0.5);
        assert!(check_density_matrix(&rho, 4).is_err());
        let neg = ComplexMatrix::real_diag(&[1.5, -0.5]);
        assert!(check_density_matrix(&neg, 2).is_err());
        assert!(check_density_matrix(&ComplexMatrix::identity(2), 4).is_err());
        let psi = ComplexMatrix::column(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(check_pure_state(&psi, 2).is_err());
    }
}
