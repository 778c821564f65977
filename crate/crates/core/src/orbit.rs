// SPDX-License-Identifier: Apache-2.0

//! Entanglement variation on fixed-Schmidt-spectrum local-unitary orbits.

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::entpower::{require_qubits, DeltaP};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::{concurrence_from_factor, StateMeasures};
use crate::sampling::{check_theta, mu_of_theta, orbit_state, try_mc_estimate, McEstimate, SampleStream, SchmidtOrbit};
use crate::twocopy::{moment_operator, orbit_moment_coefficients, Purities, TwoCopyTable};

fn check_mu(d: usize, mu: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange { name: "d", value: d as f64, range: ">= 2" });
    }
    if !(mu >= 1.0 / d as f64 - 1e-12 && mu <= 1.0 + 1e-12) {
        return Err(Error::ParameterOutOfRange { name: "mu", value: mu, range: "[1/d, 1]" });
    }
    Ok(())
}

/// Orbit second moment `Ω(μ) = ∫ [(U_A⊗U_B)|φ_λ><φ_λ|(U_A⊗U_B)†]^{⊗2}`.
pub fn omega_mu(d: usize, mu: f64) -> Result<ComplexMatrix> {
    check_mu(d, mu)?;
    Ok(moment_operator(d, orbit_moment_coefficients(d, mu)))
}

/// Orbit-averaged output purities at reduced input purity μ.
pub fn orbit_purities(ch: &KrausChannel, mu: f64) -> Result<Purities> {
    let table = TwoCopyTable::new(ch)?;
    check_mu(table.d(), mu)?;
    Ok(table.purities(&orbit_moment_coefficients(table.d(), mu)))
}

/// Orbit-averaged output linear entropy `1 − Σ Tr[(K_α⊗K_β)Ω(μ)(K_α⊗K_β)† S_AA']`.
pub fn el_out_orbit_analytic(ch: &KrausChannel, mu: f64) -> Result<f64> {
    Ok(orbit_purities(ch, mu)?.linear_entropy())
}

/// `Δe_L = E̅_L,out − (1 − μ)`
pub fn delta_el_analytic(ch: &KrausChannel, mu: f64) -> Result<f64> {
    Ok(el_out_orbit_analytic(ch, mu)? - (1.0 - mu))
}

/// Orbit-averaged `δ_P`, both traced-out variants.
pub fn delta_p_orbit_analytic(ch: &KrausChannel, mu: f64) -> Result<DeltaP> {
    Ok(DeltaP::from_purities(&orbit_purities(ch, mu)?))
}

/// Analytic orbit quantities of a two-qubit channel at one Schmidt angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitBounds {
    pub theta: f64,
    pub mu: f64,
    /// `2 max{0, δ̄_P(θ)} − sin 2θ`
    pub lower: f64,
    /// `√(2 E̅_L,out(θ)) − sin 2θ`
    pub upper: f64,
    /// `½√(2 E̅_L,out(θ)) − ½ sin 2θ`
    pub en_upper: f64,
    /// Larger of the two traced-out variants of `δ̄_P(θ)`.
    pub delta_p: f64,
    pub delta_el: f64,
    pub global_impurity: f64,
}

/// Bounds at θ from a precomputed two-copy table, so that a θ sweep builds the table once.
pub fn orbit_bounds(table: &TwoCopyTable, theta: f64) -> Result<OrbitBounds> {
    if table.d() != 2 {
        return Err(Error::RequiresQubits { da: table.d(), db: table.d() });
    }
    check_theta(theta)?;
    let mu = mu_of_theta(theta);
    let p = table.purities(&orbit_moment_coefficients(2, mu));
    let s = (2.0 * theta).sin();
    let delta_p = DeltaP::from_purities(&p).max();
    let root = (2.0 * p.linear_entropy().max(0.0)).sqrt();
    Ok(OrbitBounds {
        theta,
        mu,
        lower: 2.0 * delta_p.max(0.0) - s,
        upper: root - s,
        en_upper: 0.5 * root - 0.5 * s,
        delta_p,
        delta_el: p.linear_entropy() - (1.0 - mu),
        global_impurity: p.global_impurity(),
    })
}

fn two_qubit_table(ch: &KrausChannel) -> Result<TwoCopyTable> {
    require_qubits(ch)?;
    TwoCopyTable::new(ch)
}

/// `(2 max{0, δ̄_P(θ)} − sin 2θ, √(2 E̅_L,out(θ)) − sin 2θ)`
pub fn delta_ec_bounds(ch: &KrausChannel, theta: f64) -> Result<(f64, f64)> {
    let b = orbit_bounds(&two_qubit_table(ch)?, theta)?;
    Ok((b.lower, b.upper))
}

/// `Δe_N ≤ ½√(2 E̅_L,out(θ)) − ½ sin 2θ`
pub fn delta_en_upper(ch: &KrausChannel, theta: f64) -> Result<f64> {
    Ok(orbit_bounds(&two_qubit_table(ch)?, theta)?.en_upper)
}

/// Input values `(C_in, N_in, E_L,in, C_in²)` at Schmidt angle θ.
pub fn input_values(theta: f64) -> [f64; 4] {
    let s = (2.0 * theta).sin();
    [s, 0.5 * s, 0.5 * s * s, s * s]
}

/// Monte Carlo orbit averages `[Δe_C, Δe_N, Δe_L, Δe_{C²}, 1 − Tr ρ²]` from shared samples.
pub fn orbit_variation_mc(ch: &KrausChannel, theta: f64, n: u64, stream: &SampleStream) -> Result<[McEstimate; 5]> {
    require_qubits(ch)?;
    let orbit = SchmidtOrbit::from_theta(theta)?;
    let [c, nn, l, c2, imp] = try_mc_estimate(n, stream, |rng| {
        let m = StateMeasures::of_factor(&ch.pure_output_factor(&orbit_state(&orbit, rng)))?;
        Ok([m.concurrence, m.negativity, m.linear_entropy, m.tangle, 1.0 - m.purity])
    })?;
    let [c_in, n_in, l_in, c2_in] = input_values(theta);
    Ok([c.shifted(c_in), nn.shifted(n_in), l.shifted(l_in), c2.shifted(c2_in), imp])
}

/// Monte Carlo `Δe_C(θ)`. Evaluates the concurrence only.
pub fn delta_ec_mc(ch: &KrausChannel, theta: f64, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    require_qubits(ch)?;
    let orbit = SchmidtOrbit::from_theta(theta)?;
    let [c] = try_mc_estimate(n, stream, |rng| {
        Ok([concurrence_from_factor(&ch.pure_output_factor(&orbit_state(&orbit, rng)))?])
    })?;
    Ok(c.shifted(input_values(theta)[0]))
}

/// Monte Carlo `Δe_N(θ)`.
pub fn delta_en_mc(ch: &KrausChannel, theta: f64, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    Ok(orbit_variation_mc(ch, theta, n, stream)?[1])
}

/// Monte Carlo `Δe_L(θ)`.
pub fn delta_el_mc(ch: &KrausChannel, theta: f64, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    Ok(orbit_variation_mc(ch, theta, n, stream)?[2])
}

/// Monte Carlo `Δe_{C²}(θ)`.
pub fn delta_ec2_mc(ch: &KrausChannel, theta: f64, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    Ok(orbit_variation_mc(ch, theta, n, stream)?[3])
}

/// Monte Carlo `Δe_L` on a general-d orbit given by its Schmidt vector.
pub fn delta_el_mc_lambda(
    ch: &KrausChannel,
    orbit: &SchmidtOrbit,
    n: u64,
    stream: &SampleStream,
) -> Result<McEstimate> {
    let d = ch.d_a();
    if ch.d_b() != d || orbit.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "orbit of dimension {} on a {}x{} channel",
            orbit.dim(),
            ch.d_a(),
            ch.d_b()
        )));
    }
    let [est] = try_mc_estimate(n, stream, |rng| {
        let rho = ch.apply_pure(&orbit_state(orbit, rng));
        Ok([crate::measures::linear_entropy(&rho, d, d)?])
    })?;
    Ok(est.shifted(1.0 - orbit.mu()))
}

/// Orbit-resolved variation diagnostics of a two-qubit channel at one Schmidt angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitVariationReport {
    pub theta: f64,
    pub mu: f64,
    pub delta_ec: McEstimate,
    pub delta_en: McEstimate,
    pub delta_el: McEstimate,
    pub delta_ec2: McEstimate,
    pub global_impurity_mc: McEstimate,
    /// Analytic orbit `δ̄_P` (larger variant).
    pub deltap_orbit: f64,
    pub delta_el_analytic: f64,
    pub global_impurity: f64,
    pub lower: f64,
    pub upper: f64,
    pub en_upper: f64,
    pub stream: SampleStream,
}

/// Monte Carlo variations together with the analytic bounds at Schmidt angle θ.
pub fn orbit_variation(ch: &KrausChannel, theta: f64, n: u64, stream: &SampleStream) -> Result<OrbitVariationReport> {
    let [delta_ec, delta_en, delta_el, delta_ec2, global_impurity_mc] = orbit_variation_mc(ch, theta, n, stream)?;
    let b = orbit_bounds(&two_qubit_table(ch)?, theta)?;
    Ok(OrbitVariationReport {
        theta,
        mu: b.mu,
        delta_ec,
        delta_en,
        delta_el,
        delta_ec2,
        global_impurity_mc,
        deltap_orbit: b.delta_p,
        delta_el_analytic: b.delta_el,
        global_impurity: b.global_impurity,
        lower: b.lower,
        upper: b.upper,
        en_upper: b.en_upper,
        stream: *stream,
    })
}
