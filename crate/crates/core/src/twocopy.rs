// SPDX-License-Identifier: Apache-2.0

//! Two-copy contractions `Σ_{αβ} Tr[(K_α⊗K_β) P (K_α⊗K_β)† X]`.
//!
//! Every Haar second-moment operator used here is a combination of the four
//! input permutations `P ∈ {1, S_AA'S_BB', S_AA', S_BB'}`, and every output
//! functional is a trace against `X ∈ {S_AA', S_BB', S_AA'S_BB'}`. A
//! [`TwoCopyTable`] holds the 4×3 table of these contractions for a channel,
//! after which any moment operator is a linear combination of its rows.
//!
//! The contractions run over the tensor `R[a,b,c,e] = Σ_α K_α[a,b] conj(K_α[c,e])`,
//! so their cost does not grow with the number of Kraus pairs.

use num_complex::Complex64;

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{swap_operator, swap_permutation, ComplexMatrix, SwapPair, ZERO};

/// Input permutations, in table row order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputTerm {
    Identity = 0,
    FullSwap = 1,
    SwapA = 2,
    SwapB = 3,
}

/// Output functionals, in table column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputTerm {
    /// `Tr[(ρ⊗ρ) S_AA'] = Tr ρ_A²`
    SwapA = 0,
    /// `Tr[(ρ⊗ρ) S_BB'] = Tr ρ_B²`
    SwapB = 1,
    /// `Tr[(ρ⊗ρ) S_AA'S_BB'] = Tr ρ²`
    FullSwap = 2,
}

/// Coefficients of a moment operator `c₀·1 + c₁·S_AA'S_BB' + c₂·S_AA' + c₃·S_BB'`.
pub type MomentCoefficients = [f64; 4];

/// `Ω_⊗ = (1 + S_AA')(1 + S_BB') / (d²(d+1)²)`
pub fn product_moment_coefficients(d: usize) -> MomentCoefficients {
    let d = d as f64;
    let c = 1.0 / (d * d * (d + 1.0) * (d + 1.0));
    [c, c, c, c]
}

/// `Ω(μ) = [(d²+1−2μd)(1 + S_AA'S_BB') + ((d²+1)μ − 2d)(S_AA' + S_BB')] / (d²(d²−1)²)`
pub fn orbit_moment_coefficients(d: usize, mu: f64) -> MomentCoefficients {
    let d = d as f64;
    let norm = 1.0 / (d * d * (d * d - 1.0).powi(2));
    let a = (d * d + 1.0 - 2.0 * mu * d) * norm;
    let b = ((d * d + 1.0) * mu - 2.0 * d) * norm;
    [a, a, b, b]
}

/// Explicit operator `c₀·1 + c₁·S_AA'S_BB' + c₂·S_AA' + c₃·S_BB'` on `(C^d⊗C^d)^{⊗2}`.
pub fn moment_operator(d: usize, c: MomentCoefficients) -> ComplexMatrix {
    let n = d * d * d * d;
    let mut out = ComplexMatrix::identity(n).scale_real(c[0]);
    out.add_scaled(Complex64::new(c[1], 0.0), &swap_operator(d, SwapPair::Both));
    out.add_scaled(Complex64::new(c[2], 0.0), &swap_operator(d, SwapPair::AA));
    out.add_scaled(Complex64::new(c[3], 0.0), &swap_operator(d, SwapPair::BB));
    out
}

/// Two-copy contraction table of a channel with equal local dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoCopyTable {
    d: usize,
    values: [[f64; 3]; 4],
    imag_residue: f64,
}

impl TwoCopyTable {
    pub fn new(ch: &KrausChannel) -> Result<Self> {
        let (da, db) = (ch.d_a(), ch.d_b());
        if da != db {
            return Err(Error::UnequalLocalDims { da, db });
        }
        let d = da;
        let dim = d * d;
        let n = dim * dim;

        let mut r = vec![ZERO; n * n];
        for k in ch.kraus() {
            let ks = k.as_slice();
            for (ab, x) in ks.iter().enumerate() {
                if *x == ZERO {
                    continue;
                }
                let row = &mut r[ab * n..(ab + 1) * n];
                for (slot, y) in row.iter_mut().zip(ks) {
                    *slot += x * y.conj();
                }
            }
        }

        let identity: Vec<usize> = (0..n).collect();
        let inputs = [
            identity,
            swap_permutation(d, SwapPair::Both),
            swap_permutation(d, SwapPair::AA),
            swap_permutation(d, SwapPair::BB),
        ];
        let outputs =
            [swap_permutation(d, SwapPair::AA), swap_permutation(d, SwapPair::BB), swap_permutation(d, SwapPair::Both)];

        let mut values = [[0.0; 3]; 4];
        let mut imag_residue: f64 = 0.0;
        let idx = |a: usize, b: usize, c: usize, e: usize| ((a * dim + b) * dim + c) * dim + e;
        for (p_row, p) in inputs.iter().enumerate() {
            for (x_col, x) in outputs.iter().enumerate() {
                // Σ_{i,k} R[i₁, p(k)₁, x(i)₁, k₁] · R[i₂, p(k)₂, x(i)₂, k₂]
                let mut acc = ZERO;
                for i in 0..n {
                    let (i1, i2) = (i / dim, i % dim);
                    let (x1, x2) = (x[i] / dim, x[i] % dim);
                    for k in 0..n {
                        let (k1, k2) = (k / dim, k % dim);
                        let (p1, p2) = (p[k] / dim, p[k] % dim);
                        acc += r[idx(i1, p1, x1, k1)] * r[idx(i2, p2, x2, k2)];
                    }
                }
                values[p_row][x_col] = acc.re;
                imag_residue = imag_residue.max(acc.im.abs());
            }
        }
        Ok(TwoCopyTable { d, values, imag_residue })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Largest imaginary part discarded from the table entries.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    pub fn entry(&self, input: InputTerm, output: OutputTerm) -> f64 {
        self.values[input as usize][output as usize]
    }

    /// `Tr[(Φ⊗Φ)(Ω) X]` for `Ω` given by its coefficients.
    pub fn contract(&self, c: &MomentCoefficients, output: OutputTerm) -> f64 {
        (0..4).map(|p| c[p] * self.values[p][output as usize]).sum()
    }

    /// Average output purities `(Tr ρ_A², Tr ρ_B², Tr ρ²)` under the moment operator `c`.
    pub fn purities(&self, c: &MomentCoefficients) -> Purities {
        Purities {
            reduced_a: self.contract(c, OutputTerm::SwapA),
            reduced_b: self.contract(c, OutputTerm::SwapB),
            global: self.contract(c, OutputTerm::FullSwap),
        }
    }
}

/// Haar-averaged output purities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Purities {
    /// Average `Tr ρ_A²`.
    pub reduced_a: f64,
    /// Average `Tr ρ_B²`.
    pub reduced_b: f64,
    /// Average `Tr ρ²`.
    pub global: f64,
}

impl Purities {
    /// Average `E_L = 1 − Tr ρ_A²`.
    pub fn linear_entropy(&self) -> f64 {
        1.0 - self.reduced_a
    }

    /// Average `δ_P` with B traced out, `Tr ρ² − Tr ρ_A²`.
    pub fn delta_p_a(&self) -> f64 {
        self.global - self.reduced_a
    }

    /// Average `δ_P` with A traced out, `Tr ρ² − Tr ρ_B²`.
    pub fn delta_p_b(&self) -> f64 {
        self.global - self.reduced_b
    }

    /// `1 − Tr ρ²`
    pub fn global_impurity(&self) -> f64 {
        1.0 - self.global
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::sampling::SampleStream;
    use crate::zoo;

    /// `Σ Tr[(K_α⊗K_β) Ω (K_α⊗K_β)† X]` with explicit matrices.
    fn dense_contraction(ch: &KrausChannel, omega: &ComplexMatrix, x: &ComplexMatrix) -> Complex64 {
        let mut acc = ZERO;
        for a in ch.kraus() {
            for b in ch.kraus() {
                let k = kron(a, b);
                acc += crate::linalg::trace_product(&k.matmul(omega).matmul_adjoint(&k), x);
            }
        }
        acc
    }

    fn check_against_dense(ch: &KrausChannel, tol: f64) {
        let d = ch.d_a();
        let table = TwoCopyTable::new(ch).unwrap();
        assert!(table.imag_residue() < 1e-10);
        let xs = [
            (OutputTerm::SwapA, swap_operator(d, SwapPair::AA)),
            (OutputTerm::SwapB, swap_operator(d, SwapPair::BB)),
            (OutputTerm::FullSwap, swap_operator(d, SwapPair::Both)),
        ];
        let mu = 0.5 * (1.0 + 1.0 / d as f64);
        for c in [product_moment_coefficients(d), orbit_moment_coefficients(d, mu)] {
            let omega = moment_operator(d, c);
            for (term, x) in &xs {
                let dense = dense_contraction(ch, &omega, x);
                assert!(dense.im.abs() < 1e-10);
                assert!((table.contract(&c, *term) - dense.re).abs() < tol, "{term:?}");
            }
        }
    }

    #[test]
    fn fast_contraction_matches_dense_algebra() {
        let s = SampleStream::new(21, 0);
        check_against_dense(&zoo::cz_phase_damping(1.5, 1.0, 0.8).unwrap(), 1e-12);
        check_against_dense(&zoo::local_amplitude_damping(0.3).unwrap(), 1e-12);
        for i in 0..3 {
            check_against_dense(&zoo::random_channel(2, 2, 4, &mut s.at(i).rng()), 1e-12);
        }
        check_against_dense(&zoo::random_channel(3, 3, 2, &mut s.at(9).rng()), 1e-12);
    }

    #[test]
    fn identity_channel_purities() {
        let table = TwoCopyTable::new(&KrausChannel::identity(2, 2)).unwrap();
        let p = table.purities(&product_moment_coefficients(2));
        assert!((p.global - 1.0).abs() < 1e-14);
        assert!((p.reduced_a - 1.0).abs() < 1e-14);
        for mu in [0.5, 0.75, 1.0] {
            let p = table.purities(&orbit_moment_coefficients(2, mu));
            assert!((p.reduced_a - mu).abs() < 1e-14);
            assert!((p.reduced_b - mu).abs() < 1e-14);
            assert!((p.global - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn moment_operators_have_unit_trace() {
        for d in 2..=4 {
            assert!((moment_operator(d, product_moment_coefficients(d)).trace().re - 1.0).abs() < 1e-12);
            for mu in [1.0 / d as f64, 0.7, 1.0] {
                assert!((moment_operator(d, orbit_moment_coefficients(d, mu)).trace().re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_unequal_dims() {
        assert!(TwoCopyTable::new(&KrausChannel::identity(2, 3)).is_err());
    }
}
