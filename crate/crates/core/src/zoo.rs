// SPDX-License-Identifier: Apache-2.0

//! Named two-qubit channel families and random channel generators.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::gates::{controlled_phase as cp_gate, cz, pauli_x, pauli_y, pauli_z};
use crate::linalg::{kron, ComplexMatrix};
use crate::sampling::{haar_isometry, haar_unitary, StreamRng};

fn unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ParameterOutOfRange { name, value, range: "[0, 1]" });
    }
    Ok(())
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::ParameterOutOfRange { name, value, range: "finite" });
    }
    Ok(())
}

fn zz() -> ComplexMatrix {
    kron(&pauli_z(), &pauli_z())
}

/// The two-qubit identity channel.
pub fn identity() -> KrausChannel {
    KrausChannel::identity(2, 2)
}

/// `(1−γ)ρ + γ(Z⊗Z)ρ(Z⊗Z)`, γ ∈ [0, 1]; coherence factor `u = 1 − 2γ`.
pub fn correlated_dephasing(gamma: f64) -> Result<KrausChannel> {
    unit_interval("gamma", gamma)?;
    let kraus = vec![ComplexMatrix::identity(4).scale_real((1.0 - gamma).sqrt()), zz().scale_real(gamma.sqrt())];
    KrausChannel::new(2, 2, kraus)
}

/// Correlated dephasing parametrised by `u ∈ [−1, 1]`.
pub fn correlated_dephasing_u(u: f64) -> Result<KrausChannel> {
    check_u(u)?;
    correlated_dephasing((1.0 - u) / 2.0)
}

fn check_u(u: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::ParameterOutOfRange { name: "u", value: u, range: "[-1, 1]" });
    }
    Ok(())
}

/// Single-qubit phase flip `(1−γ)ρ + γZρZ`.
pub fn phase_flip_kraus(gamma: f64) -> Result<Vec<ComplexMatrix>> {
    unit_interval("gamma", gamma)?;
    Ok(vec![ComplexMatrix::identity(2).scale_real((1.0 - gamma).sqrt()), pauli_z().scale_real(gamma.sqrt())])
}

/// Single-qubit amplitude damping with decay probability γ.
pub fn amplitude_damping_kraus(gamma: f64) -> Result<Vec<ComplexMatrix>> {
    unit_interval("gamma", gamma)?;
    Ok(vec![
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]),
        ComplexMatrix::from_real(2, 2, &[0.0, gamma.sqrt(), 0.0, 0.0]),
    ])
}

/// Single-qubit depolarizing `(1−p)ρ + p·I/2`.
pub fn depolarizing_kraus(p: f64) -> Result<Vec<ComplexMatrix>> {
    unit_interval("p", p)?;
    let w = (p / 4.0).sqrt();
    Ok(vec![
        ComplexMatrix::identity(2).scale_real((1.0 - 0.75 * p).sqrt()),
        pauli_x().scale_real(w),
        pauli_y().scale_real(w),
        pauli_z().scale_real(w),
    ])
}

/// `Λ_γ ⊗ Λ_γ` with independent phase flips.
pub fn local_phase_flip(gamma: f64) -> Result<KrausChannel> {
    let k = phase_flip_kraus(gamma)?;
    product_channel(&k, &k)
}

/// `Λ^AD_γ ⊗ Λ^AD_γ`
pub fn local_amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    let k = amplitude_damping_kraus(gamma)?;
    product_channel(&k, &k)
}

/// `D_p ⊗ D_p`
pub fn local_depolarizing(p: f64) -> Result<KrausChannel> {
    let k = depolarizing_kraus(p)?;
    product_channel(&k, &k)
}

/// `(1−p)ρ + p·I/4`, written with the sixteen two-qubit Pauli products.
pub fn global_depolarizing(p: f64) -> Result<KrausChannel> {
    unit_interval("p", p)?;
    let paulis = [ComplexMatrix::identity(2), pauli_x(), pauli_y(), pauli_z()];
    let w = (p / 16.0).sqrt();
    let mut kraus = Vec::with_capacity(16);
    for (i, a) in paulis.iter().enumerate() {
        for (j, b) in paulis.iter().enumerate() {
            let weight = if i == 0 && j == 0 { (1.0 - 15.0 * p / 16.0).sqrt() } else { w };
            if weight > 0.0 {
                kraus.push(kron(a, b).scale_real(weight));
            }
        }
    }
    KrausChannel::new(2, 2, kraus)
}

/// `Ad_{CP(φ)}` with `CP(φ) = diag(1, 1, 1, e^{iφ})`; φ is reduced modulo 2π.
pub fn controlled_phase(phi: f64) -> Result<KrausChannel> {
    finite("phi", phi)?;
    KrausChannel::new(2, 2, vec![cp_gate(phi.rem_euclid(TAU))])
}

/// `Φ_u ∘ Ad_CZ`, u ∈ [−1, 1].
pub fn cz_correlated_dephasing(u: f64) -> Result<KrausChannel> {
    let noise = correlated_dephasing_u(u)?;
    KrausChannel::compose(&noise, &KrausChannel::new(2, 2, vec![cz()])?)
}

fn check_damping(rate: f64, t: f64) -> Result<()> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "Gamma", value: rate, range: "[0, inf)" });
    }
    finite("t", t)
}

/// Diagonal Kraus pair of correlated phase damping at rate Γ and time t.
fn phase_damping_kraus(rate: f64, t: f64) -> (ComplexMatrix, ComplexMatrix) {
    let decay = (-rate * t * t / 2.0).exp();
    let s = (1.0 - decay * decay).max(0.0).sqrt();
    (ComplexMatrix::real_diag(&[decay, 1.0, 1.0, decay]), ComplexMatrix::real_diag(&[s, 0.0, 0.0, s]))
}

/// Correlated phase damping; acts as correlated dephasing with `u = e^{−Γt²/2}`.
pub fn phase_damping(rate: f64, t: f64) -> Result<KrausChannel> {
    check_damping(rate, t)?;
    let (k0, k1) = phase_damping_kraus(rate, t);
    KrausChannel::new(2, 2, vec![k0, k1])
}

/// `U_{g,t} = e^{−igt} diag(1, 1, 1, e^{2igt})`
pub fn cz_evolution(g: f64, t: f64) -> ComplexMatrix {
    let phase = Complex64::from_polar(1.0, -g * t);
    cp_gate(2.0 * g * t).scale(phase)
}

/// Correlated phase damping composed with the coupling evolution `U_{g,t}`.
pub fn cz_phase_damping(g: f64, rate: f64, t: f64) -> Result<KrausChannel> {
    check_damping(rate, t)?;
    finite("g", g)?;
    let u = cz_evolution(g, t);
    let (k0, k1) = phase_damping_kraus(rate, t);
    // Both factors are diagonal, so the order does not matter.
    KrausChannel::new(2, 2, vec![u.matmul(&k0), u.matmul(&k1)])
}

/// `Λ_A ⊗ Λ_B` with Kraus operators `A_i ⊗ B_j`.
pub fn product_channel(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> Result<KrausChannel> {
    let da = local_dim(a, "A")?;
    let db = local_dim(b, "B")?;
    let mut kraus = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            kraus.push(crate::linalg::tensor_product(x, y)?);
        }
    }
    KrausChannel::new(da, db, kraus)
}

fn local_dim(kraus: &[ComplexMatrix], side: &str) -> Result<usize> {
    let first = kraus.first().ok_or_else(|| Error::InvalidChannel(format!("empty Kraus list on {side}")))?;
    let d = first.rows();
    if kraus.iter().any(|k| k.rows() != d || k.cols() != d) {
        return Err(Error::DimensionMismatch(format!("Kraus operators on {side} must all be {d}x{d}")));
    }
    Ok(d)
}

/// `√p·U₁ , √(1−p)·U₂`
pub fn mixed_unitary(p: f64, u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<KrausChannel> {
    unit_interval("p", p)?;
    let a = KrausChannel::unitary(2, 2, u1.clone())?;
    let b = KrausChannel::unitary(2, 2, u2.clone())?;
    KrausChannel::mix(p, &a, &b)
}

/// Kraus operators of `ρ ↦ Tr_E[V ρ V†]` for a Haar isometry `V: C^d → C^d ⊗ C^env`.
pub fn random_kraus(d: usize, env: usize, rng: &mut StreamRng) -> Vec<ComplexMatrix> {
    let v = haar_isometry(d * env, d, rng);
    (0..env)
        .map(|e| {
            let mut k = ComplexMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    k[(i, j)] = v[(i * env + e, j)];
                }
            }
            k
        })
        .collect()
}

/// Random channel on `C^da ⊗ C^db` from a Stinespring dilation with environment dimension `env`.
pub fn random_channel(da: usize, db: usize, env: usize, rng: &mut StreamRng) -> KrausChannel {
    KrausChannel::new(da, db, random_kraus(da * db, env, rng)).expect("dilation Kraus operators are square")
}

/// Random two-qubit unitary channel `Ad_U` with Haar U.
pub fn random_unitary_channel(rng: &mut StreamRng) -> KrausChannel {
    KrausChannel::new(2, 2, vec![haar_unitary(4, rng)]).expect("4x4 unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SampleStream;

    fn grid() -> impl Iterator<Item = f64> {
        (0..=20).map(|i| i as f64 / 20.0)
    }

    #[test]
    fn zoo_is_trace_preserving_on_grids() {
        for x in grid() {
            for ch in [
                correlated_dephasing(x).unwrap(),
                local_phase_flip(x).unwrap(),
                local_amplitude_damping(x).unwrap(),
                local_depolarizing(x).unwrap(),
                global_depolarizing(x).unwrap(),
                controlled_phase(TAU * x).unwrap(),
                cz_correlated_dephasing(2.0 * x - 1.0).unwrap(),
                phase_damping(1.0, 3.0 * x).unwrap(),
                cz_phase_damping(1.5, 1.0, 3.0 * x).unwrap(),
            ] {
                let report = ch.validate();
                assert!(report.passed, "{report:?}");
            }
        }
    }

    #[test]
    fn zero_noise_is_identity() {
        let id = identity();
        for ch in [
            correlated_dephasing(0.0).unwrap(),
            local_phase_flip(0.0).unwrap(),
            local_amplitude_damping(0.0).unwrap(),
            local_depolarizing(0.0).unwrap(),
            global_depolarizing(0.0).unwrap(),
            controlled_phase(0.0).unwrap(),
            phase_damping(1.0, 0.0).unwrap(),
        ] {
            assert!(ch.approx_eq(&id, 1e-12));
        }
    }

    #[test]
    fn parameter_domains() {
        assert!(correlated_dephasing(-0.1).is_err());
        assert!(local_depolarizing(1.1).is_err());
        assert!(cz_correlated_dephasing(1.5).is_err());
        assert!(phase_damping(-1.0, 1.0).is_err());
        assert!(controlled_phase(f64::NAN).is_err());
    }

    #[test]
    fn global_depolarizing_full_noise_is_maximally_mixing() {
        let ch = global_depolarizing(1.0).unwrap();
        let psi = ComplexMatrix::basis(4, 1);
        let out = ch.apply(&ComplexMatrix::outer(&psi)).unwrap();
        assert!(out.distance(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-14);
    }

    #[test]
    fn controlled_phase_pi_is_cz() {
        let a = controlled_phase(std::f64::consts::PI).unwrap();
        let b = KrausChannel::unitary(2, 2, cz()).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
        assert!(controlled_phase(0.3 + TAU).unwrap().approx_eq(&controlled_phase(0.3).unwrap(), 1e-12));
    }

    #[test]
    fn phase_damping_is_correlated_dephasing() {
        for t in [0.0, 0.4, 1.0, 2.2, 3.0] {
            let pd = phase_damping(1.0, t).unwrap();
            let cd = correlated_dephasing((1.0 - (-t * t / 2.0).exp()) / 2.0).unwrap();
            assert!(pd.choi_distance(&cd).unwrap() < 1e-9);
        }
    }

    #[test]
    fn cz_phase_damping_factors() {
        for t in [0.0, 0.7, 1.9] {
            let (g, rate) = (1.5, 1.0);
            let noisy = cz_phase_damping(g, rate, t).unwrap();
            let ideal = KrausChannel::unitary(2, 2, cz_evolution(g, t)).unwrap();
            let composed = KrausChannel::compose(&phase_damping(rate, t).unwrap(), &ideal).unwrap();
            assert!(noisy.approx_eq(&composed, 1e-12));
        }
    }

    #[test]
    fn noisy_cz_error_channel_is_dephasing() {
        let u = 0.35;
        let err = cz_correlated_dephasing(u).unwrap().error_channel(&cz()).unwrap();
        assert!(err.approx_eq(&correlated_dephasing_u(u).unwrap(), 1e-12));
    }

    #[test]
    fn random_channels_are_valid() {
        let s = SampleStream::new(5, 0);
        for i in 0..10 {
            let ch = random_channel(2, 3, 4, &mut s.at(i).rng());
            assert!(ch.validate().passed);
            assert_eq!(ch.kraus().len(), 4);
        }
    }
}
