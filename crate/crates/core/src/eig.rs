// SPDX-License-Identifier: Apache-2.0

//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Every spectral quantity in the crate (square roots, trace norms,
//! concurrence, negativity) goes through [`hermitian_eig`] or
//! [`hermitian_eigenvalues`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};

/// Sweep budget before [`Error::NoConvergence`].
pub const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to `‖H‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
/// Admissible `‖H − H†‖_F / max(1, ‖H‖_F)` for input.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues down to `−CLIP_TOL` are treated as rounding noise and clipped to zero.
pub const CLIP_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HermitianEigenDecomposition {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenDecomposition {
    /// `V f(Λ) V†`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fk = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= fk;
            }
        }
        scaled.matmul_adjoint(v)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigensolver needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Runs the sweeps in place. `vectors` accumulates the rotations when present.
fn jacobi(a: &mut [Complex64], n: usize, mut vectors: Option<&mut [Complex64]>) -> Result<()> {
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(());
    }
    let threshold = OFF_DIAGONAL_TOL * scale;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(a, n);
        if off <= threshold {
            for i in 0..n {
                a[i * n + i].im = 0.0;
            }
            return Ok(());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Phase e^{-iφ} on column q makes the (p,q) entry real, then a
                // real rotation annihilates it.
                let phase = apq / r;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = -s * phase.conj();
                let g_qq = c * phase.conj();

                // A ← A G
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g_pp + akq * g_qp;
                    a[k * n + q] = akp * g_pq + akq * g_qq;
                }
                // A ← G† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = Complex64::new(app - t * r, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * r, 0.0);

                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * g_pp + vkq * g_qp;
                        v[k * n + q] = vkp * g_pq + vkq * g_qq;
                    }
                }
            }
        }
    }
    let off = off_diagonal_norm(a, n);
    if off <= threshold {
        return Ok(());
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS, off })
}

/// Full eigendecomposition `H = V Λ V†` with eigenvalues sorted descending.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigenDecomposition> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.hermitian_part().into_vec();
    let mut v = ComplexMatrix::identity(n).into_vec();
    jacobi(&mut a, n, Some(&mut v))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, new_col)] = v[row * n + old_col];
        }
    }
    Ok(HermitianEigenDecomposition { eigenvalues, eigenvectors: vectors })
}

/// Eigenvalues only, sorted descending. Skips the eigenvector accumulation.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.hermitian_part().into_vec();
    jacobi(&mut a, n, None)?;
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Clips eigenvalues in `[−CLIP_TOL, 0)` to zero; anything lower is an error.
pub(crate) fn clip_nonnegative(value: f64) -> Result<f64> {
    if value < -CLIP_TOL {
        Err(Error::NegativeEigenvalue { value })
    } else {
        Ok(value.max(0.0))
    }
}

/// Positive semidefinite square root.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    if let Some(&min) = eig.eigenvalues.last() {
        clip_nonnegative(min)?;
    }
    Ok(eig.map_spectrum(|x| x.max(0.0).sqrt()))
}

/// `‖H‖₁ = Σ|λ_i|`
pub fn trace_norm_hermitian(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?.iter().map(|x| x.abs()).sum())
}
