// SPDX-License-Identifier: Apache-2.0

//! Entangling powers over Haar product inputs and their two-copy bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::{concurrence_from_factor, linear_entropy, negativity_unchecked, StateMeasures};
use crate::sampling::{product_state, try_mc_estimate, McEstimate, SampleStream, StreamRng};
use crate::twocopy::{moment_operator, product_moment_coefficients, Purities, TwoCopyTable};

pub(crate) fn require_qubits(ch: &KrausChannel) -> Result<()> {
    if !ch.is_two_qubit() {
        return Err(Error::RequiresQubits { da: ch.d_a(), db: ch.d_b() });
    }
    Ok(())
}

/// `Φ(|ψ_A ψ_B><ψ_A ψ_B|)` for a fresh Haar product input.
pub fn sample_product_output(ch: &KrausChannel, rng: &mut StreamRng) -> ComplexMatrix {
    ch.apply_pure(&product_state(ch.d_a(), ch.d_b(), rng))
}

/// Pointwise two-qubit measures of the output for a fresh Haar product input.
pub fn product_output_measures(ch: &KrausChannel, rng: &mut StreamRng) -> Result<StateMeasures> {
    StateMeasures::of_factor(&ch.pure_output_factor(&product_state(ch.d_a(), ch.d_b(), rng)))
}

/// Monte Carlo `e_C`.
pub fn e_c_mc(ch: &KrausChannel, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    require_qubits(ch)?;
    let [est] = try_mc_estimate(n, stream, |rng| {
        Ok([concurrence_from_factor(&ch.pure_output_factor(&product_state(2, 2, rng)))?])
    })?;
    Ok(est)
}

/// Monte Carlo `e_{C²}`.
pub fn e_c2_mc(ch: &KrausChannel, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    require_qubits(ch)?;
    let [est] = try_mc_estimate(n, stream, |rng| Ok([product_output_measures(ch, rng)?.tangle]))?;
    Ok(est)
}

/// Monte Carlo `e_N` for any local dimensions.
pub fn e_n_mc(ch: &KrausChannel, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    let (da, db) = (ch.d_a(), ch.d_b());
    let [est] =
        try_mc_estimate(n, stream, |rng| Ok([negativity_unchecked(&sample_product_output(ch, rng), da, db)?]))?;
    Ok(est)
}

/// Monte Carlo `e_L` for any local dimensions.
pub fn e_l_mc(ch: &KrausChannel, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    let (da, db) = (ch.d_a(), ch.d_b());
    let [est] = try_mc_estimate(n, stream, |rng| Ok([linear_entropy(&sample_product_output(ch, rng), da, db)?]))?;
    Ok(est)
}

/// `e_C(Φ_u^CZ) = uπ²/16`
pub fn e_c_noisy_cz(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::ParameterOutOfRange { name: "u", value: u, range: "[0, 1]" });
    }
    Ok(u * PI * PI / 16.0)
}

/// `Ω_⊗ = (1 + S_AA')(1 + S_BB') / (d²(d+1)²)` on `(C^d⊗C^d)^{⊗2}`.
pub fn omega_product(d: usize) -> ComplexMatrix {
    moment_operator(d, product_moment_coefficients(d))
}

/// Product-input average output purities from the two-copy formula.
pub fn product_purities(ch: &KrausChannel) -> Result<Purities> {
    Ok(TwoCopyTable::new(ch)?.purities(&product_moment_coefficients(ch.d_a())))
}

/// Both traced-out variants of an averaged `δ_P`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaP {
    /// `Tr ρ² − Tr ρ_A²`, B traced out.
    pub a: f64,
    /// `Tr ρ² − Tr ρ_B²`, A traced out.
    pub b: f64,
}

impl DeltaP {
    pub fn max(&self) -> f64 {
        self.a.max(self.b)
    }

    pub(crate) fn from_purities(p: &Purities) -> DeltaP {
        DeltaP { a: p.delta_p_a(), b: p.delta_p_b() }
    }
}

/// Product-input average `δ̄_P^⊗` from the two-copy formula, both variants.
pub fn delta_p_product_analytic(ch: &KrausChannel) -> Result<DeltaP> {
    Ok(DeltaP::from_purities(&product_purities(ch)?))
}

/// `e_L` from the two-copy formula.
pub fn e_l_analytic(ch: &KrausChannel) -> Result<f64> {
    Ok(product_purities(ch)?.linear_entropy())
}

/// `(2 max{0, δ̄_P^⊗}, √(2 e_L))`, with the larger of the two `δ̄_P` variants.
pub fn e_c_bounds(ch: &KrausChannel) -> Result<(f64, f64)> {
    require_qubits(ch)?;
    let p = product_purities(ch)?;
    Ok(bounds_from_purities(&p))
}

pub(crate) fn bounds_from_purities(p: &Purities) -> (f64, f64) {
    let lower = 2.0 * DeltaP::from_purities(p).max().max(0.0);
    let upper = (2.0 * p.linear_entropy().max(0.0)).sqrt();
    (lower, upper)
}

/// `e_N ≤ ½√(2 e_L)`
pub fn e_n_upper(ch: &KrausChannel) -> Result<f64> {
    Ok(0.5 * e_c_bounds(ch)?.1)
}

/// Monte Carlo entangling powers with the analytic two-copy bounds of a two-qubit channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglingPowerReport {
    pub e_c: McEstimate,
    pub e_n: McEstimate,
    pub e_l: McEstimate,
    pub e_c2: McEstimate,
    /// Monte Carlo averages of the two `δ_P` variants.
    pub delta_p_a_mc: McEstimate,
    pub delta_p_b_mc: McEstimate,
    pub global_impurity_mc: McEstimate,
    /// Analytic `δ̄_P^⊗` (both variants).
    pub delta_p: DeltaP,
    /// Larger of the two analytic `δ̄_P^⊗` variants.
    pub delta_p_avg: f64,
    pub e_l_analytic: f64,
    pub global_impurity: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub e_n_upper: f64,
    pub stream: SampleStream,
}

/// All product-input entangling powers from one set of shared samples.
pub fn entangling_power(ch: &KrausChannel, n: u64, stream: &SampleStream) -> Result<EntanglingPowerReport> {
    require_qubits(ch)?;
    let [e_c, e_n, e_l, e_c2, dpa, dpb, imp] = try_mc_estimate(n, stream, |rng| {
        let m = product_output_measures(ch, rng)?;
        Ok([m.concurrence, m.negativity, m.linear_entropy, m.tangle, m.delta_p_a, m.delta_p_b, 1.0 - m.purity])
    })?;
    let p = product_purities(ch)?;
    let (lower_bound, upper_bound) = bounds_from_purities(&p);
    let delta_p = DeltaP::from_purities(&p);
    Ok(EntanglingPowerReport {
        e_c,
        e_n,
        e_l,
        e_c2,
        delta_p_a_mc: dpa,
        delta_p_b_mc: dpb,
        global_impurity_mc: imp,
        delta_p,
        delta_p_avg: delta_p.max(),
        e_l_analytic: p.linear_entropy(),
        global_impurity: p.global_impurity(),
        lower_bound,
        upper_bound,
        e_n_upper: 0.5 * upper_bound,
        stream: *stream,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn identity_has_no_entangling_power() {
        let r = entangling_power(&zoo::identity(), 500, &SampleStream::new(1, 0)).unwrap();
        assert!(r.e_c.max < 1e-12);
        assert!(r.e_l.mean.abs() < 1e-12);
        assert!(r.lower_bound.abs() < 1e-14);
        assert!(r.upper_bound.abs() < 1e-7);
        assert!(r.e_n_upper.abs() < 1e-7);
    }

    #[test]
    fn cp_pi_bounds() {
        let (lower, upper) = e_c_bounds(&zoo::controlled_phase(PI).unwrap()).unwrap();
        assert!((upper - 2.0 / 3.0).abs() < 1e-12);
        assert!(lower <= PI * PI / 16.0);
        assert!((e_l_analytic(&zoo::controlled_phase(PI).unwrap()).unwrap() - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_cz_closed_form() {
        assert_eq!(e_c_noisy_cz(0.0).unwrap(), 0.0);
        assert!((e_c_noisy_cz(1.0).unwrap() - PI * PI / 16.0).abs() < 1e-15);
        assert!(e_c_noisy_cz(1.5).is_err());
    }

    #[test]
    fn omega_product_is_swap_symmetric() {
        let omega = omega_product(2);
        let s = crate::linalg::swap_operator(2, crate::linalg::SwapPair::AA);
        assert!(s.matmul(&omega).distance(&omega) < 1e-15);
        assert!((omega.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn qubit_only_quantities_reject_qutrits() {
        let ch = KrausChannel::identity(3, 3);
        assert!(e_c_mc(&ch, 10, &SampleStream::new(0, 0)).is_err());
        assert!(e_c_bounds(&ch).is_err());
        assert!(e_l_mc(&ch, 10, &SampleStream::new(0, 0)).unwrap().mean.abs() < 1e-12);
    }
}
