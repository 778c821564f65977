// SPDX-License-Identifier: Apache-2.0

//! Input–output fidelity diagnostics: average, product-input and orbit-resolved.

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::sampling::{
    check_theta, haar_pure_state, mu_of_theta, orbit_state, product_state, try_mc_estimate, McEstimate,
    SampleStream, SchmidtOrbit,
};

/// `F_avg = (D + T) / (D(D + 1))`
pub fn favg_analytic(ch: &KrausChannel) -> f64 {
    let d = ch.dim() as f64;
    (d + ch.t()) / (d * (d + 1.0))
}

/// `F_prod = (D + T + M_A + M_B) / (D(dA + 1)(dB + 1))`
pub fn fprod_analytic(ch: &KrausChannel) -> f64 {
    let d = ch.dim() as f64;
    let (da, db) = (ch.d_a() as f64, ch.d_b() as f64);
    (d + ch.t() + ch.m_a() + ch.m_b()) / (d * (da + 1.0) * (db + 1.0))
}

/// Fidelity bias `χ_F = F_avg − F_prod`.
pub fn chi_f(ch: &KrausChannel) -> f64 {
    favg_analytic(ch) - fprod_analytic(ch)
}

/// `χ_F` of a two-qubit product channel from the single-qubit average fidelities.
pub fn chi_f_product(fa: f64, fb: f64) -> f64 {
    (2.0 + 4.0 * fa * fb - 3.0 * fa - 3.0 * fb) / 5.0
}

/// Average fidelity `(d + Σ|Tr A_i|²) / (d(d + 1))` of a single-system channel.
pub fn local_favg(kraus: &[ComplexMatrix]) -> f64 {
    let d = kraus[0].rows() as f64;
    let x: f64 = kraus.iter().map(|k| k.trace().norm_sqr()).sum();
    (d + x) / (d * (d + 1.0))
}

fn orbit_dim(ch: &KrausChannel) -> Result<usize> {
    if ch.d_a() != ch.d_b() {
        return Err(Error::UnequalLocalDims { da: ch.d_a(), db: ch.d_b() });
    }
    if ch.d_a() < 2 {
        return Err(Error::InvalidChannel("orbit fidelity needs local dimension at least 2".into()));
    }
    Ok(ch.d_a())
}

fn check_mu(d: usize, mu: f64) -> Result<()> {
    let lo = 1.0 / d as f64;
    // Slack for μ computed from θ or λ in floating point.
    if !(mu >= lo - 1e-12 && mu <= 1.0 + 1e-12) {
        return Err(Error::ParameterOutOfRange { name: "mu", value: mu, range: "[1/d, 1]" });
    }
    Ok(())
}

/// Orbit-averaged fidelity `F_prod + ((d²+1)/(d−1)²)(1−μ)χ_F` for equal local dimension d.
pub fn forbit_analytic(ch: &KrausChannel, mu: f64) -> Result<f64> {
    let d = orbit_dim(ch)?;
    check_mu(d, mu)?;
    let df = d as f64;
    Ok(fprod_analytic(ch) + (df * df + 1.0) / (df - 1.0).powi(2) * (1.0 - mu) * chi_f(ch))
}

/// The same orbit fidelity written directly in the Kraus invariants T, M_A, M_B.
pub fn forbit_raw(ch: &KrausChannel, mu: f64) -> Result<f64> {
    let d = orbit_dim(ch)?;
    check_mu(d, mu)?;
    let d = d as f64;
    let d2 = d * d;
    let first = (d2 + ch.t()) * (1.0 + 1.0 / d2 - 2.0 * mu / d);
    let second = (ch.m_a() + ch.m_b()) * ((1.0 + 1.0 / d2) * mu - 2.0 / d);
    Ok((first + second) / (d2 - 1.0).powi(2))
}

/// Two-qubit orbit fidelity at Schmidt angle θ ∈ [0, π/4].
pub fn ftheta_analytic(ch: &KrausChannel, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    forbit_analytic(ch, mu_of_theta(theta))
}

/// Monte Carlo `F_avg` over Haar pure states of the full system.
pub fn favg_mc(ch: &KrausChannel, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    let dim = ch.dim();
    let [est] = try_mc_estimate(n, stream, |rng| Ok([ch.pure_fidelity(&haar_pure_state(dim, rng))]))?;
    Ok(est)
}

/// Monte Carlo `F_prod` over independent Haar product states.
pub fn fprod_mc(ch: &KrausChannel, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    let (da, db) = (ch.d_a(), ch.d_b());
    let [est] = try_mc_estimate(n, stream, |rng| Ok([ch.pure_fidelity(&product_state(da, db, rng))]))?;
    Ok(est)
}

/// Monte Carlo orbit fidelity over `(U_A⊗U_B)|φ_λ>`.
pub fn forbit_mc(ch: &KrausChannel, orbit: &SchmidtOrbit, n: u64, stream: &SampleStream) -> Result<McEstimate> {
    let d = orbit_dim(ch)?;
    if orbit.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "Schmidt vector has {} entries, channel has local dimension {d}",
            orbit.dim()
        )));
    }
    let [est] = try_mc_estimate(n, stream, |rng| Ok([ch.pure_fidelity(&orbit_state(orbit, rng))]))?;
    Ok(est)
}

/// Analytic fidelity summary of a channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityProfile {
    pub f_avg: f64,
    pub f_prod: f64,
    pub chi_f: f64,
    /// `(μ, F_μ)` pairs; empty when the local dimensions differ.
    pub orbit_curve: Vec<(f64, f64)>,
    /// Description of the target the channel was compared against, if any.
    pub reference: Option<String>,
}

/// Number of μ points in a profile's orbit curve.
pub const PROFILE_POINTS: usize = 11;

impl FidelityProfile {
    pub fn of(ch: &KrausChannel) -> FidelityProfile {
        let f_avg = favg_analytic(ch);
        let f_prod = fprod_analytic(ch);
        let orbit_curve = match orbit_dim(ch) {
            Ok(d) => {
                let lo = 1.0 / d as f64;
                (0..PROFILE_POINTS)
                    .map(|i| {
                        // Runs from μ = 1 down to μ = 1/d.
                        let mu = 1.0 - (1.0 - lo) * i as f64 / (PROFILE_POINTS - 1) as f64;
                        (mu, forbit_analytic(ch, mu).expect("mu is in range"))
                    })
                    .collect()
            }
            Err(_) => Vec::new(),
        };
        FidelityProfile { f_avg, f_prod, chi_f: f_avg - f_prod, orbit_curve, reference: None }
    }
}

/// Profile of the error channel `Ad_{U†} ∘ Φ` for a unitary target `U`.
pub fn relative_profile(ch: &KrausChannel, target: &ComplexMatrix) -> Result<FidelityProfile> {
    let err = ch.error_channel(target)?;
    let mut profile = FidelityProfile::of(&err);
    profile.reference = Some(format!("unitary target ({}x{})", target.rows(), target.cols()));
    Ok(profile)
}
