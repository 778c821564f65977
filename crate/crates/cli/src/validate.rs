// SPDX-License-Identifier: Apache-2.0

//! The `validate` suite: deterministic invariants, Monte Carlo agreement with
//! closed forms at 3σ, and the common-random-number property checks.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use serde::Serialize;

use biq_core::entpower::{e_l_analytic, entangling_power};
use biq_core::fidelity::{
    chi_f, chi_f_product, favg_analytic, favg_mc, fprod_analytic, fprod_mc, forbit_analytic, forbit_mc, forbit_raw,
    ftheta_analytic, local_favg,
};
use biq_core::linalg::{gates, tensor_product};
use biq_core::measures::{concurrence_pure, linear_entropy, negativity, StateMeasures};
use biq_core::orbit::{delta_ec_mc, orbit_bounds, orbit_variation};
use biq_core::sampling::{haar_pure_state, haar_unitary, product_state, try_mc_estimate, StreamRng};
use biq_core::twocopy::{moment_operator, orbit_moment_coefficients};
use biq_core::{
    entpower::omega_product, orbit::omega_mu, zoo, ComplexMatrix, KrausChannel, McEstimate, SampleStream,
    SchmidtOrbit, TwoCopyTable,
};

use crate::error::CliResult;
use crate::family::{ChannelSpec, Family, FamilyOptions};

/// Sample count used by `--quick`.
pub const QUICK_SAMPLES: u64 = 10_000;
/// Agreement threshold in standard errors.
pub const Z_MAX: f64 = 3.0;
/// Absolute slack added to every statistical comparison, for round-off in exact cases.
pub const NUMERIC_FLOOR: f64 = 1e-9;
/// Tolerance of closed-form identities.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst value of the check statistic: a z-score, a residual or a count.
    pub statistic: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: u64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub checks: Vec<Check>,
}

/// `max(0, |mean − value| − floor) / stderr`, infinite if a gap remains at zero stderr.
pub fn excess_z(est: &McEstimate, value: f64) -> f64 {
    one_sided_z((est.mean - value).abs(), est.stderr)
}

/// `max(0, gap − floor) / sigma` for a gap that should be non-positive.
pub fn one_sided_z(gap: f64, sigma: f64) -> f64 {
    let excess = gap - NUMERIC_FLOOR;
    if excess <= 0.0 {
        0.0
    } else if sigma > 0.0 {
        excess / sigma
    } else {
        f64::INFINITY
    }
}

struct Worst {
    value: f64,
    label: String,
}

impl Worst {
    fn new() -> Worst {
        Worst { value: 0.0, label: String::new() }
    }

    fn see(&mut self, value: f64, label: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = if value.is_nan() { f64::INFINITY } else { value };
            self.label = label();
        }
    }
}

struct Suite {
    root: SampleStream,
    n: u64,
    next: u64,
    checks: Vec<Check>,
}

impl Suite {
    fn stream(&mut self) -> SampleStream {
        self.next += 1;
        self.root.child(self.next)
    }

    fn record(&mut self, name: &str, worst: Worst, threshold: f64) {
        self.checks.push(Check {
            name: name.into(),
            passed: worst.value <= threshold,
            statistic: worst.value,
            threshold,
            detail: worst.label,
        });
    }
}

/// A single-qubit channel `qρ + (1−q)Λ(ρ)` with a random Stinespring `Λ` and uniform `q`.
pub fn random_local_kraus(rng: &mut StreamRng) -> Vec<ComplexMatrix> {
    let q = rng.uniform();
    let mut kraus = vec![ComplexMatrix::identity(2).scale_real(q.sqrt())];
    kraus.extend(zoo::random_kraus(2, 2, rng).into_iter().map(|k| k.scale_real((1.0 - q).sqrt())));
    kraus
}

/// `Ad_{vA⊗vB} ∘ ch ∘ Ad_{wA⊗wB}` with Haar local unitaries.
pub fn local_unitary_dressing(ch: &KrausChannel, rng: &mut StreamRng) -> CliResult<KrausChannel> {
    let mut local = || -> CliResult<KrausChannel> {
        let u = tensor_product(&haar_unitary(2, rng), &haar_unitary(2, rng))?;
        Ok(KrausChannel::unitary(2, 2, u)?)
    };
    let (pre, post) = (local()?, local()?);
    Ok(KrausChannel::compose(&post, &KrausChannel::compose(ch, &pre)?)?)
}

fn measures(ch: &KrausChannel, psi: &ComplexMatrix) -> biq_core::Result<StateMeasures> {
    StateMeasures::of_factor(&ch.pure_output_factor(psi))
}

fn family(f: Family, x: f64, seed: u64) -> CliResult<KrausChannel> {
    ChannelSpec::parse(f.name(), FamilyOptions { seed, ..FamilyOptions::default() })?.at(x)
}

/// Runs the full suite with `n` samples per estimate.
pub fn run_suite(seed: u64, n: u64) -> CliResult<SuiteReport> {
    let mut s = Suite { root: SampleStream::new(seed, 0x7661_6c69), n, next: 0, checks: Vec::new() };
    zoo_validity(&mut s, seed)?;
    channel_identities(&mut s)?;
    fidelity_closed_forms(&mut s)?;
    local_channel_pairs(&mut s)?;
    fidelity_mc(&mut s, seed)?;
    orbit_fidelity_mc(&mut s)?;
    moment_operators(&mut s)?;
    entangling_power_closed_forms(&mut s)?;
    separable_families(&mut s)?;
    bound_chains(&mut s, seed)?;
    lu_invariance(&mut s)?;
    convexity(&mut s, seed)?;
    postprocessing(&mut s, seed)?;
    pure_state_identities(&mut s)?;
    orbit_checks(&mut s)?;
    let failures: Vec<String> = s.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    Ok(SuiteReport { seed, samples: n, passed: failures.is_empty(), failures, checks: s.checks })
}

fn zoo_validity(s: &mut Suite, seed: u64) -> CliResult<()> {
    let mut worst = Worst::new();
    let mut bad_invariants = 0usize;
    for f in Family::ALL {
        let grid = match f {
            Family::Identity | Family::Cz => vec![0.0],
            Family::ControlledPhase => (0..=20).map(|i| -PI + 4.0 * PI * i as f64 / 20.0).collect(),
            Family::PhaseDamping | Family::CzPhaseDamping => (0..=20).map(|i| 3.0 * i as f64 / 20.0).collect(),
            _ => (0..=20).map(|i| i as f64 / 20.0).collect(),
        };
        for x in grid {
            let ch = family(f, x, seed)?;
            let r = ch.validate();
            worst.see(r.completeness_residual, || format!("{} at {x}", f.name()));
            let d2 = (ch.dim() * ch.dim()) as f64;
            if !(r.t >= -EXACT_TOL && r.t <= d2 + 1e-9 && r.m_a >= -EXACT_TOL && r.m_b >= -EXACT_TOL) {
                bad_invariants += 1;
            }
        }
    }
    for (g, rate, t) in [(0.0, 0.0, 1.0), (2.5, 0.3, 2.0), (-1.0, 4.0, 0.1)] {
        let r = zoo::cz_phase_damping(g, rate, t)?.validate();
        worst.see(r.completeness_residual, || format!("cz-phase-damping g={g} Gamma={rate} t={t}"));
    }
    if bad_invariants > 0 {
        worst.see(f64::INFINITY, || format!("{bad_invariants} channels with invariants out of range"));
    }
    s.record("zoo-trace-preservation", worst, 1e-9);

    let rejected = [
        zoo::correlated_dephasing(1.5).is_err(),
        zoo::local_depolarizing(-0.1).is_err(),
        zoo::global_depolarizing(2.0).is_err(),
        zoo::local_amplitude_damping(f64::NAN).is_err(),
        zoo::cz_correlated_dephasing(1.5).is_err(),
        zoo::phase_damping(-1.0, 1.0).is_err(),
        KrausChannel::new(2, 2, vec![ComplexMatrix::identity(4).scale_real(0.5f64.sqrt())])?.ensure_valid().is_err(),
    ];
    let misses = rejected.iter().filter(|ok| !**ok).count();
    let mut worst = Worst::new();
    worst.see(misses as f64, || format!("{misses} out-of-domain inputs accepted"));
    s.record("zoo-domain-errors", worst, 0.0);
    Ok(())
}

fn channel_identities(s: &mut Suite) -> CliResult<()> {
    let mut worst = Worst::new();
    let cz = KrausChannel::unitary(2, 2, gates::cz())?;
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        let u = 1.0 - 2.0 * x;
        let noisy = zoo::cz_correlated_dephasing(x)?;
        let composed = KrausChannel::compose(&zoo::correlated_dephasing_u(x)?, &cz)?;
        worst.see(noisy.choi_distance(&composed)?, || format!("compose(dephasing, CZ) at u={x}"));
        let err = noisy.error_channel(&gates::cz())?;
        worst.see(err.choi_distance(&zoo::correlated_dephasing_u(x)?)?, || format!("error channel at u={x}"));
        let t = 3.0 * x;
        let pd = zoo::phase_damping(1.0, t)?;
        let cd = zoo::correlated_dephasing((1.0 - (-t * t / 2.0).exp()) / 2.0)?;
        worst.see(pd.choi_distance(&cd)?, || format!("phase damping vs dephasing at t={t}"));
        for ch in [zoo::local_amplitude_damping(x)?, zoo::cz_phase_damping(1.5, 1.0, t)?, zoo::controlled_phase(u * PI)?]
        {
            let back = KrausChannel::from_json(&ch.to_json())?;
            let same = back.kraus().iter().zip(ch.kraus()).all(|(a, b)| a.as_slice() == b.as_slice());
            worst.see(if same { 0.0 } else { f64::INFINITY }, || "JSON round trip is not bit exact".into());
        }
    }
    let half = KrausChannel::mix(
        0.5,
        &KrausChannel::identity(2, 2),
        &KrausChannel::unitary(2, 2, tensor_product(&gates::pauli_z(), &gates::pauli_z())?)?,
    )?;
    worst.see(half.choi_distance(&zoo::correlated_dephasing(0.5)?)?, || "mix(1/2, I, ZZ)".into());
    s.record("channel-algebra-choi", worst, 1e-9);
    Ok(())
}

fn fidelity_closed_forms(s: &mut Suite) -> CliResult<()> {
    let mut worst = Worst::new();
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        let u = 1.0 - 2.0 * x;
        let cd = zoo::correlated_dephasing(x)?;
        worst.see((favg_analytic(&cd) - (0.6 + 0.4 * u)).abs(), || format!("dephasing F_avg at {x}"));
        worst.see((fprod_analytic(&cd) - (5.0 + 4.0 * u) / 9.0).abs(), || format!("dephasing F_prod at {x}"));
        worst.see((chi_f(&cd) - 4.0 * x / 45.0).abs(), || format!("dephasing chi_F at {x}"));
        let gd = zoo::global_depolarizing(x)?;
        worst.see((favg_analytic(&gd) - (1.0 - 0.75 * x)).abs(), || format!("global depolarizing F_avg at {x}"));
        worst.see((fprod_analytic(&gd) - (1.0 - 0.75 * x)).abs(), || format!("global depolarizing F_prod at {x}"));
        let lpf = zoo::local_phase_flip(x)?;
        worst.see((chi_f(&lpf) - 4.0 * x * (4.0 * x - 3.0) / 45.0).abs(), || format!("phase flip chi_F at {x}"));
        let ld = zoo::local_depolarizing(x)?;
        worst.see((chi_f(&ld) - x * (x - 1.0) / 5.0).abs(), || format!("local depolarizing chi_F at {x}"));
        let rel = zoo::cz_correlated_dephasing(x)?.error_channel(&gates::cz())?;
        worst.see((favg_analytic(&rel) - (0.6 + 0.4 * x)).abs(), || format!("noisy CZ relative F_avg at u={x}"));
        let pd = zoo::cz_phase_damping(1.5, 1.0, 3.0 * x)?;
        for mu in [0.5, 0.75, 1.0] {
            worst.see((forbit_analytic(&pd, mu)? - forbit_raw(&pd, mu)?).abs(), || format!("orbit law at mu={mu}"));
        }
    }
    let xx = KrausChannel::unitary(2, 2, tensor_product(&gates::pauli_x(), &gates::pauli_x())?)?;
    worst.see((chi_f(&xx) - 4.0 / 45.0).abs(), || "chi_F(Ad_XX)".into());
    s.record("fidelity-closed-forms", worst, EXACT_TOL);
    Ok(())
}

fn local_channel_pairs(s: &mut Suite) -> CliResult<()> {
    let stream = s.stream();
    let mut invariants = Worst::new();
    let mut sign = Worst::new();
    let mut accepted = 0;
    let mut k = 0;
    while accepted < 50 {
        let mut rng = stream.at(k).rng();
        k += 1;
        let (a, b) = (random_local_kraus(&mut rng), random_local_kraus(&mut rng));
        let ch = zoo::product_channel(&a, &b)?;
        let xa: f64 = a.iter().map(|m| m.trace().norm_sqr()).sum();
        let xb: f64 = b.iter().map(|m| m.trace().norm_sqr()).sum();
        invariants.see((ch.t() - xa * xb).abs(), || format!("T for pair {k}"));
        invariants.see((ch.m_a() - 2.0 * xb).abs(), || format!("M_A for pair {k}"));
        invariants.see((ch.m_b() - 2.0 * xa).abs(), || format!("M_B for pair {k}"));
        let (fa, fb) = (local_favg(&a), local_favg(&b));
        invariants.see((chi_f(&ch) - chi_f_product(fa, fb)).abs(), || format!("product chi_F for pair {k}"));
        if fa >= 0.5 && fb >= 0.5 {
            accepted += 1;
            sign.see(chi_f(&ch).max(0.0), || format!("chi_F > 0 with fA={fa}, fB={fb}"));
        }
    }
    s.record("product-channel-invariants", invariants, EXACT_TOL);
    s.record("chi-f-sign-condition", sign, EXACT_TOL);
    Ok(())
}

fn fidelity_mc(s: &mut Suite, seed: u64) -> CliResult<()> {
    let mut worst = Worst::new();
    let channels = [
        ("correlated-dephasing(0.3)", zoo::correlated_dephasing(0.3)?),
        ("local-amplitude-damping(0.4)", zoo::local_amplitude_damping(0.4)?),
        ("cz-phase-damping(t=0.8)", zoo::cz_phase_damping(1.5, 1.0, 0.8)?),
        ("mixed-unitary(0.3)", family(Family::MixedUnitary, 0.3, seed)?),
    ];
    for (name, ch) in &channels {
        let avg = favg_mc(ch, s.n, &s.stream())?;
        worst.see(excess_z(&avg, favg_analytic(ch)), || format!("F_avg of {name}"));
        let prod = fprod_mc(ch, s.n, &s.stream())?;
        worst.see(excess_z(&prod, fprod_analytic(ch)), || format!("F_prod of {name}"));
    }
    s.record("fidelity-mc", worst, Z_MAX);
    Ok(())
}

fn orbit_fidelity_mc(s: &mut Suite) -> CliResult<()> {
    let mut worst = Worst::new();
    let ch = zoo::random_channel(2, 2, 3, &mut s.stream().rng());
    for theta in [0.0, FRAC_PI_8, FRAC_PI_4] {
        let est = forbit_mc(&ch, &SchmidtOrbit::from_theta(theta)?, s.n, &s.stream())?;
        worst.see(excess_z(&est, ftheta_analytic(&ch, theta)?), || format!("F_theta at theta={theta}"));
    }
    let ch3 = zoo::random_channel(3, 3, 4, &mut s.stream().rng());
    let orbit = SchmidtOrbit::new(vec![0.5, 0.3, 0.2])?;
    let est = forbit_mc(&ch3, &orbit, s.n, &s.stream())?;
    worst.see(excess_z(&est, forbit_analytic(&ch3, orbit.mu())?), || "qutrit orbit fidelity".into());
    s.record("orbit-fidelity-mc", worst, Z_MAX);
    Ok(())
}

fn moment_operators(s: &mut Suite) -> CliResult<()> {
    let mut worst = Worst::new();
    for d in 2..=4 {
        worst.see(omega_mu(d, 1.0)?.max_abs_diff(&omega_product(d)), || format!("Omega(1) vs product at d={d}"));
        for mu in [1.0 / d as f64, 0.8, 1.0] {
            let tr = moment_operator(d, orbit_moment_coefficients(d, mu)).trace();
            worst.see((tr.re - 1.0).abs() + tr.im.abs(), || format!("trace of Omega({mu}) at d={d}"));
        }
    }
    s.record("moment-operators", worst, EXACT_TOL);
    Ok(())
}

fn entangling_power_closed_forms(s: &mut Suite) -> CliResult<()> {
    let mut worst = Worst::new();
    let r = entangling_power(&zoo::controlled_phase(PI)?, s.n, &s.stream())?;
    worst.see(excess_z(&r.e_c, PI * PI / 16.0), || "e_C of CZ".into());
    worst.see(excess_z(&r.e_n, PI * PI / 32.0), || "e_N of CZ".into());
    worst.see(excess_z(&r.e_l, 2.0 / 9.0), || "e_L of CZ".into());
    let u = 0.5;
    let r = entangling_power(&zoo::cz_correlated_dephasing(u)?, s.n, &s.stream())?;
    worst.see(excess_z(&r.e_c, u * PI * PI / 16.0), || "e_C of noisy CZ".into());
    worst.see(excess_z(&r.e_l, 1.0 / 3.0 - u * u / 9.0), || "e_L of noisy CZ".into());
    s.record("entangling-power-closed-forms", worst, Z_MAX);
    Ok(())
}

fn separable_families(s: &mut Suite) -> CliResult<()> {
    let mut vanishing = Worst::new();
    let mut closed = Worst::new();
    let cases: [(&str, KrausChannel, f64); 5] = [
        ("correlated-dephasing(1/4)", zoo::correlated_dephasing(0.25)?, 4.0 * 0.25 * 0.75 / 3.0),
        ("local-amplitude-damping(1/2)", zoo::local_amplitude_damping(0.5)?, 2.0 * 0.25 / 3.0),
        ("local-depolarizing(1/2)", zoo::local_depolarizing(0.5)?, 0.5 - 0.125),
        ("local-phase-flip(1/4)", zoo::local_phase_flip(0.25)?, e_l_analytic(&zoo::local_phase_flip(0.25)?)?),
        ("global-depolarizing(1/2)", zoo::global_depolarizing(0.5)?, e_l_analytic(&zoo::global_depolarizing(0.5)?)?),
    ];
    for (name, ch, e_l) in &cases {
        let r = entangling_power(ch, s.n, &s.stream())?;
        vanishing.see(r.e_c.max.max(r.e_n.max), || format!("largest sampled C or N of {name}"));
        closed.see(excess_z(&r.e_l, *e_l), || format!("e_L of {name}"));
    }
    s.record("separable-outputs", vanishing, NUMERIC_FLOOR);
    s.record("separable-e_L-closed-forms", closed, Z_MAX);
    Ok(())
}

fn bound_chains(s: &mut Suite, seed: u64) -> CliResult<()> {
    let mut chain = Worst::new();
    let mut analytic = Worst::new();
    let channels = [
        ("controlled-phase(pi/2)", zoo::controlled_phase(PI / 2.0)?),
        ("noisy-cz(0.8)", zoo::cz_correlated_dephasing(0.8)?),
        ("local-amplitude-damping(0.3)", zoo::local_amplitude_damping(0.3)?),
        ("phase-damping(t=1)", zoo::phase_damping(1.0, 1.0)?),
        ("cz-phase-damping(t=0.6)", zoo::cz_phase_damping(1.5, 1.0, 0.6)?),
        ("mixed-unitary(0.4)", family(Family::MixedUnitary, 0.4, seed)?),
    ];
    for (name, ch) in &channels {
        let r = entangling_power(ch, s.n, &s.stream())?;
        let (c, c2, en) = (r.e_c, r.e_c2, r.e_n);
        let sig = |a: f64, b: f64| (a * a + b * b).sqrt();
        chain.see(one_sided_z(r.lower_bound - c.mean, c.stderr), || format!("lower > e_C for {name}"));
        chain.see(one_sided_z(c.mean - r.upper_bound, c.stderr), || format!("e_C > upper for {name}"));
        chain.see(one_sided_z(c.mean * c.mean - c2.mean, sig(2.0 * c.mean * c.stderr, c2.stderr)), || {
            format!("e_C^2 > e_C2 for {name}")
        });
        chain.see(one_sided_z(c2.mean - c.mean, sig(c.stderr, c2.stderr)), || format!("e_C2 > e_C for {name}"));
        chain.see(one_sided_z(en.mean - 0.5 * c.mean, sig(en.stderr, 0.5 * c.stderr)), || {
            format!("e_N > e_C/2 for {name}")
        });
        chain.see(one_sided_z(en.mean - r.e_n_upper, en.stderr), || format!("e_N above its bound for {name}"));
        analytic.see(excess_z(&r.e_l, r.e_l_analytic), || format!("e_L two-copy formula for {name}"));
    }
    s.record("bound-chain", chain, Z_MAX);
    s.record("e_L-two-copy-vs-mc", analytic, Z_MAX);

    let mut lower = Worst::new();
    for i in 0..=40 {
        let t = 3.0 * i as f64 / 40.0;
        let b = orbit_bounds(&TwoCopyTable::new(&zoo::phase_damping(1.0, t)?)?, 0.0)?;
        lower.see(b.lower.abs(), || format!("phase-damping lower bound at t={t}"));
    }
    s.record("phase-damping-lower-bound-zero", lower, EXACT_TOL);
    Ok(())
}

fn lu_invariance(s: &mut Suite) -> CliResult<()> {
    let mut worst = Worst::new();
    for (name, ch) in [("controlled-phase(pi/2)", zoo::controlled_phase(PI / 2.0)?), (
        "cz-phase-damping(t=0.7)",
        zoo::cz_phase_damping(1.5, 1.0, 0.7)?,
    )] {
        let dressed = local_unitary_dressing(&ch, &mut s.stream().rng())?;
        let [dc, dn] = try_mc_estimate(s.n, &s.stream(), |rng| {
            let psi = product_state(2, 2, rng);
            let (a, b) = (measures(&ch, &psi)?, measures(&dressed, &psi)?);
            Ok([b.concurrence - a.concurrence, b.negativity - a.negativity])
        })?;
        worst.see(excess_z(&dc, 0.0), || format!("e_C shift under local unitaries for {name}"));
        worst.see(excess_z(&dn, 0.0), || format!("e_N shift under local unitaries for {name}"));
    }
    s.record("lu-invariance", worst, Z_MAX);
    Ok(())
}

fn convexity(s: &mut Suite, seed: u64) -> CliResult<()> {
    let mut worst = Worst::new();
    let pairs = [
        (zoo::controlled_phase(PI)?, zoo::cz_phase_damping(1.5, 1.0, 0.6)?),
        (family(Family::MixedUnitary, 1.0, seed)?, family(Family::MixedUnitary, 0.0, seed)?),
    ];
    let n = (s.n / 4).max(100);
    for (k, (a, b)) in pairs.iter().enumerate() {
        for p in [0.25, 0.5, 0.8] {
            let mix = KrausChannel::mix(p, a, b)?;
            let [vc, vn, vl] = try_mc_estimate(n, &s.stream(), |rng| {
                let psi = product_state(2, 2, rng);
                let (ma, mb, mm) = (measures(a, &psi)?, measures(b, &psi)?, measures(&mix, &psi)?);
                let q = 1.0 - p;
                Ok([
                    mm.concurrence - (p * ma.concurrence + q * mb.concurrence),
                    mm.negativity - (p * ma.negativity + q * mb.negativity),
                    (p * ma.linear_entropy + q * mb.linear_entropy) - mm.linear_entropy,
                ])
            })?;
            worst.see(vc.max.max(vn.max).max(vl.max), || format!("pair {k} at p={p}"));
        }
    }
    s.record("convexity-pointwise", worst, NUMERIC_FLOOR);
    Ok(())
}

fn postprocessing(s: &mut Suite, seed: u64) -> CliResult<()> {
    let mut worst = Worst::new();
    let noise = zoo::local_depolarizing(0.3)?;
    let n = (s.n / 4).max(100);
    for ch in [
        zoo::controlled_phase(PI)?,
        zoo::cz_correlated_dephasing(0.8)?,
        zoo::cz_phase_damping(1.5, 1.0, 0.7)?,
        family(Family::MixedUnitary, 0.3, seed)?,
    ] {
        let post = KrausChannel::compose(&noise, &ch)?;
        let [dc, dn] = try_mc_estimate(n, &s.stream(), |rng| {
            let psi = product_state(2, 2, rng);
            let (a, b) = (measures(&ch, &psi)?, measures(&post, &psi)?);
            Ok([b.concurrence - a.concurrence, b.negativity - a.negativity])
        })?;
        worst.see(dc.max.max(dn.max), || "local noise increased C or N".into());
    }
    s.record("postprocessing-monotonicity", worst, NUMERIC_FLOOR);

    // Linear entropy is not monotone: local dephasing creates it from nothing.
    let identity = entangling_power(&zoo::identity(), n, &s.stream())?;
    let dephased = entangling_power(&zoo::local_phase_flip(0.3)?, n, &s.stream())?;
    let mut worst = Worst::new();
    let z_gain = if dephased.e_l.stderr > 0.0 { (dephased.e_l.mean - identity.e_l.mean) / dephased.e_l.stderr } else { 0.0 };
    worst.see(if z_gain > Z_MAX && identity.e_l.mean.abs() < NUMERIC_FLOOR { 0.0 } else { 1.0 }, || {
        format!("e_L gain under local dephasing is {z_gain} stderr")
    });
    s.record("e_L-monotonicity-counterexample", worst, 0.0);
    Ok(())
}

fn pure_state_identities(s: &mut Suite) -> CliResult<()> {
    let n = (s.n / 10).max(100);
    let [d1, d2] = try_mc_estimate(n, &s.stream(), |rng| {
        let psi = haar_pure_state(4, rng);
        let rho = ComplexMatrix::outer(&psi);
        let c = concurrence_pure(&psi)?;
        let m = StateMeasures::of(&rho)?;
        Ok([
            (2.0 * negativity(&rho, 2, 2)? - c).abs().max((m.concurrence - c).abs()),
            (c * c - 2.0 * linear_entropy(&rho, 2, 2)?).abs(),
        ])
    })?;
    let mut worst = Worst::new();
    worst.see(d1.max, || "2N = C".into());
    worst.see(d2.max, || "tau = 2 E_L".into());
    s.record("pure-state-identities", worst, NUMERIC_FLOOR);
    Ok(())
}

fn orbit_checks(s: &mut Suite) -> CliResult<()> {
    let mut el = Worst::new();
    let mut sandwich = Worst::new();
    let channels = [
        ("correlated-dephasing(0.3)", zoo::correlated_dephasing(0.3)?),
        ("controlled-phase(pi)", zoo::controlled_phase(PI)?),
        ("cz-phase-damping(t=0.8)", zoo::cz_phase_damping(1.5, 1.0, 0.8)?),
    ];
    for (name, ch) in &channels {
        for theta in [0.0, FRAC_PI_8, FRAC_PI_4] {
            let r = orbit_variation(ch, theta, s.n, &s.stream())?;
            el.see(excess_z(&r.delta_el, r.delta_el_analytic), || format!("delta e_L of {name} at {theta}"));
            sandwich.see(one_sided_z(r.lower - r.delta_ec.mean, r.delta_ec.stderr), || {
                format!("below lower bound: {name} at {theta}")
            });
            sandwich.see(one_sided_z(r.delta_ec.mean - r.upper, r.delta_ec.stderr), || {
                format!("above upper bound: {name} at {theta}")
            });
            sandwich.see(one_sided_z(r.delta_en.mean - r.en_upper, r.delta_en.stderr), || {
                format!("delta e_N above bound: {name} at {theta}")
            });
        }
    }
    let n = (s.n / 10).max(100);
    for (name, rate_family) in [("phase-damping", false), ("cz-phase-damping", true)] {
        for i in 0..=6 {
            let t = 0.5 * i as f64;
            let ch = if rate_family { zoo::cz_phase_damping(1.5, 1.0, t)? } else { zoo::phase_damping(1.0, t)? };
            let table = TwoCopyTable::new(&ch)?;
            for j in 0..=4 {
                let theta = FRAC_PI_4 * j as f64 / 4.0;
                let b = orbit_bounds(&table, theta)?;
                let est = delta_ec_mc(&ch, theta, n, &s.stream())?;
                sandwich.see(one_sided_z(b.lower - est.mean, est.stderr), || format!("{name} below at ({t}, {theta})"));
                sandwich.see(one_sided_z(est.mean - b.upper, est.stderr), || format!("{name} above at ({t}, {theta})"));
            }
        }
    }
    s.record("orbit-delta-e_L", el, Z_MAX);
    s.record("orbit-bound-sandwich", sandwich, Z_MAX);
    Ok(())
}

/// Checks a single channel: trace preservation and invariant ranges.
pub fn channel_report(name: &str, ch: &KrausChannel) -> SuiteReport {
    let r = ch.validate();
    let mut worst = Worst::new();
    worst.see(r.completeness_residual, || format!("completeness residual of {name}"));
    let check = Check {
        name: "channel-trace-preservation".into(),
        passed: r.passed,
        statistic: worst.value,
        threshold: biq_core::channel::COMPLETENESS_TOL,
        detail: worst.label,
    };
    let failures = if check.passed { Vec::new() } else { vec![check.name.clone()] };
    SuiteReport { seed: 0, samples: 0, passed: check.passed, failures, checks: vec![check] }
}
