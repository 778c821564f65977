// SPDX-License-Identifier: Apache-2.0

//! Entanglement monotones and purity functionals of bipartite states.

use serde::{Deserialize, Serialize};

use crate::eig::{clip_nonnegative, hermitian_eig, hermitian_eigenvalues};
use crate::error::{Error, Result};
use crate::linalg::{
    gates::yy, partial_trace_unchecked, partial_transpose_b_unchecked, purity, ComplexMatrix, Subsystem, ZERO,
};
use crate::state::{check_density_matrix, check_pure_state};

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    check_density_matrix(rho, 4)?;
    concurrence_unchecked(rho)
}

/// Concurrence without validating `rho` beyond Hermiticity.
pub fn concurrence_unchecked(rho: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::RequiresQubits { da: rho.rows(), db: rho.cols() });
    }
    let eig = hermitian_eig(rho)?;
    let mut w = eig.eigenvectors;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let s = clip_nonnegative(lambda)?.sqrt();
        for i in 0..4 {
            w[(i, k)] *= s;
        }
    }
    concurrence_of_factor(&w)
}

/// Concurrence of `ρ = WW†` for a `4×m` factor `W`.
///
/// The nonzero eigenvalues of `√ρ ρ̃ √ρ` are the squared singular values of
/// `τ = Wᵀ(σ_y⊗σ_y)W`. The singular values are read off the Hermitian dilation
/// `[[0, τ], [τ†, 0]]`, so no square root of a tiny eigenvalue is ever taken.
pub fn concurrence_from_factor(w: &ComplexMatrix) -> Result<f64> {
    if w.rows() != 4 {
        return Err(Error::RequiresQubits { da: w.rows(), db: 1 });
    }
    if w.cols() > 4 {
        return concurrence_unchecked(&w.matmul_adjoint(w));
    }
    concurrence_of_factor(w)
}

fn concurrence_of_factor(w: &ComplexMatrix) -> Result<f64> {
    let m = w.cols();
    let tau = w.transpose().matmul(&yy()).matmul(w);
    match m {
        1 => return Ok(tau[(0, 0)].norm()),
        2 => return Ok(singular_gap_2x2(&tau)),
        _ => {}
    }
    let mut dilation = ComplexMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            dilation[(i, m + j)] = tau[(i, j)];
            dilation[(m + j, i)] = tau[(i, j)].conj();
        }
    }
    // The dilation spectrum is ±σ; its top m entries are the singular values.
    let mut r = hermitian_eigenvalues(&dilation)?;
    r.truncate(m);
    r.resize(4, 0.0);
    Ok((r[0] - r[1] - r[2] - r[3]).max(0.0))
}

/// `σ₁ − σ₂` of a 2×2 matrix, from the eigenvalue gap of `τ†τ` so that equal
/// singular values give a difference at round-off level.
fn singular_gap_2x2(tau: &ComplexMatrix) -> f64 {
    let (p, q, r, s) = (tau[(0, 0)], tau[(0, 1)], tau[(1, 0)], tau[(1, 1)]);
    let a = p.norm_sqr() + r.norm_sqr();
    let c = q.norm_sqr() + s.norm_sqr();
    let b = p.conj() * q + r.conj() * s;
    let gap = ((a - c) * (a - c) + 4.0 * b.norm_sqr()).sqrt();
    let l1 = 0.5 * (a + c + gap);
    let l2 = (0.5 * (a + c - gap)).max(0.0);
    let sum = l1.sqrt() + l2.sqrt();
    if sum > 0.0 {
        gap / sum
    } else {
        0.0
    }
}

/// `2|ψ₀₀ψ₁₁ − ψ₀₁ψ₁₀|` for a unit two-qubit vector.
pub fn concurrence_pure(psi: &ComplexMatrix) -> Result<f64> {
    check_pure_state(psi, 4)?;
    let x = psi.as_slice();
    Ok(2.0 * (x[0] * x[3] - x[1] * x[2]).norm())
}

/// `N(ρ) = (‖ρ^{T_B}‖₁ − 1)/2`
pub fn negativity(rho: &ComplexMatrix, da: usize, db: usize) -> Result<f64> {
    check_density_matrix(rho, da * db)?;
    negativity_unchecked(rho, da, db)
}

/// Negativity of a unit-trace Hermitian matrix, evaluated as the summed magnitude of
/// the negative eigenvalues of `ρ^{T_B}` (equal to `(‖ρ^{T_B}‖₁ − 1)/2` at unit trace).
pub fn negativity_unchecked(rho: &ComplexMatrix, da: usize, db: usize) -> Result<f64> {
    let pt = partial_transpose_b_unchecked(rho, da, db);
    Ok(hermitian_eigenvalues(&pt)?.iter().filter(|&&x| x < 0.0).map(|x| -x).sum())
}

fn check_square(rho: &ComplexMatrix, da: usize, db: usize) -> Result<()> {
    let dim = da * db;
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, expected {dim}x{dim} for dA={da}, dB={db}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// `E_L(ρ) = 1 − Tr(ρ_A²)`
pub fn linear_entropy(rho: &ComplexMatrix, da: usize, db: usize) -> Result<f64> {
    check_square(rho, da, db)?;
    Ok(1.0 - purity(&partial_trace_unchecked(rho, da, db, Subsystem::A)))
}

/// `δ_P(ρ) = Tr(ρ²) − Tr(ρ_X²)`, where `ρ_X` is what remains after tracing out `traced`.
pub fn delta_p(rho: &ComplexMatrix, da: usize, db: usize, traced: Subsystem) -> Result<f64> {
    check_square(rho, da, db)?;
    Ok(purity(rho) - purity(&partial_trace_unchecked(rho, da, db, traced.other())))
}

/// All pointwise measures of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateMeasures {
    pub concurrence: f64,
    pub negativity: f64,
    pub linear_entropy: f64,
    pub tangle: f64,
    /// `Tr ρ²`
    pub purity: f64,
    /// `Tr ρ² − Tr ρ_A²` (B traced out).
    pub delta_p_a: f64,
    /// `Tr ρ² − Tr ρ_B²` (A traced out).
    pub delta_p_b: f64,
}

impl StateMeasures {
    pub fn of(rho: &ComplexMatrix) -> Result<Self> {
        check_density_matrix(rho, 4)?;
        Self::of_unchecked(rho)
    }

    pub fn of_unchecked(rho: &ComplexMatrix) -> Result<Self> {
        Self::assemble(rho, concurrence_unchecked(rho)?)
    }

    /// Measures of `ρ = WW†` for a `4×m` factor `W`.
    pub fn of_factor(w: &ComplexMatrix) -> Result<Self> {
        Self::assemble(&w.matmul_adjoint(w), concurrence_from_factor(w)?)
    }

    fn assemble(rho: &ComplexMatrix, c: f64) -> Result<Self> {
        let global = purity(rho);
        let pa = purity(&partial_trace_unchecked(rho, 2, 2, Subsystem::A));
        let pb = purity(&partial_trace_unchecked(rho, 2, 2, Subsystem::B));
        Ok(StateMeasures {
            concurrence: c,
            negativity: negativity_unchecked(rho, 2, 2)?,
            linear_entropy: 1.0 - pa,
            tangle: c * c,
            purity: global,
            delta_p_a: global - pa,
            delta_p_b: global - pb,
        })
    }
}

/// `cos θ |00> + sin θ |11>`
pub fn schmidt_state(theta: f64) -> ComplexMatrix {
    let mut v = [ZERO; 4];
    v[0].re = theta.cos();
    v[3].re = theta.sin();
    ComplexMatrix::column(&v)
}
