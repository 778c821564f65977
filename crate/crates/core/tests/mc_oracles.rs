// SPDX-License-Identifier: Apache-2.0

//! Sampled estimators against closed forms, at modest sample counts.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use biq_core::entpower::{e_c_bounds, e_c_mc, e_l_analytic, e_l_mc, entangling_power};
use biq_core::fidelity::{chi_f, favg_analytic, favg_mc, forbit_analytic, forbit_mc, fprod_analytic, fprod_mc, ftheta_analytic};
use biq_core::orbit::{delta_el_analytic, delta_el_mc_lambda, orbit_variation};
use biq_core::sampling::mu_of_theta;
use biq_core::zoo;
use biq_core::{McEstimate, SampleStream, SchmidtOrbit};

const N: u64 = 20_000;
const K: f64 = 4.0;
const FLOOR: f64 = 1e-9;

fn stream(id: u64) -> SampleStream {
    SampleStream::new(20_261_016, id)
}

#[track_caller]
fn agrees(est: &McEstimate, value: f64, what: &str) {
    assert!(est.agrees_with(value, K, FLOOR), "{what}: {} ± {} vs {value}", est.mean, est.stderr);
}

#[test]
fn fidelities_of_random_channels() {
    for i in 0..4 {
        let ch = zoo::random_channel(2, 2, 1 + i as usize, &mut stream(100 + i).rng());
        agrees(&favg_mc(&ch, N, &stream(200 + i)).unwrap(), favg_analytic(&ch), "F_avg");
        agrees(&fprod_mc(&ch, N, &stream(300 + i)).unwrap(), fprod_analytic(&ch), "F_prod");
    }
}

#[test]
fn orbit_fidelity_law() {
    let ch = zoo::random_channel(2, 2, 3, &mut stream(400).rng());
    for (j, theta) in [0.0, FRAC_PI_8, FRAC_PI_4].into_iter().enumerate() {
        let orbit = SchmidtOrbit::from_theta(theta).unwrap();
        let est = forbit_mc(&ch, &orbit, N, &stream(410 + j as u64)).unwrap();
        let s2 = (2.0 * theta).sin();
        let law = fprod_analytic(&ch) + 2.5 * s2 * s2 * chi_f(&ch);
        assert!((ftheta_analytic(&ch, theta).unwrap() - law).abs() < 1e-12);
        agrees(&est, law, "F_theta");
    }
    let qutrit = zoo::random_channel(3, 3, 4, &mut stream(420).rng());
    let orbit = SchmidtOrbit::new(vec![0.6, 0.3, 0.1]).unwrap();
    let est = forbit_mc(&qutrit, &orbit, N, &stream(421)).unwrap();
    agrees(&est, forbit_analytic(&qutrit, orbit.mu()).unwrap(), "F_mu (d=3)");
}

#[test]
fn controlled_phase_entangling_powers() {
    for (j, phi) in [PI / 3.0, PI / 2.0, PI].into_iter().enumerate() {
        let ch = zoo::controlled_phase(phi).unwrap();
        let s = (phi / 2.0).sin().abs();
        let r = entangling_power(&ch, N, &stream(500 + j as u64)).unwrap();
        agrees(&r.e_c, PI * PI / 16.0 * s, "e_C");
        agrees(&r.e_n, PI * PI / 32.0 * s, "e_N");
        agrees(&r.e_l, 2.0 / 9.0 * s * s, "e_L");
        assert!((r.e_l_analytic - 2.0 / 9.0 * s * s).abs() < 1e-12);
    }
}

#[test]
fn two_copy_linear_entropy_matches_sampling() {
    for i in 0..3 {
        let ch = zoo::random_channel(2, 2, 2 + i as usize, &mut stream(600 + i).rng());
        agrees(&e_l_mc(&ch, N, &stream(610 + i)).unwrap(), e_l_analytic(&ch).unwrap(), "e_L");
        let (lower, upper) = e_c_bounds(&ch).unwrap();
        let e_c = e_c_mc(&ch, N, &stream(620 + i)).unwrap();
        assert!(lower <= e_c.mean + K * e_c.stderr + FLOOR);
        assert!(e_c.mean <= upper + K * e_c.stderr + FLOOR);
    }
}

#[test]
fn orbit_linear_entropy_variation() {
    let ch = zoo::cz_phase_damping(1.5, 1.0, 0.7).unwrap();
    for (j, theta) in [0.1, 0.4, 0.7].into_iter().enumerate() {
        let r = orbit_variation(&ch, theta, N, &stream(700 + j as u64)).unwrap();
        agrees(&r.delta_el, r.delta_el_analytic, "delta e_L");
        assert!((r.mu - mu_of_theta(theta)).abs() < 1e-15);
    }
    let qutrit = zoo::random_channel(3, 3, 4, &mut stream(710).rng());
    let orbit = SchmidtOrbit::new(vec![0.5, 0.3, 0.2]).unwrap();
    let est = delta_el_mc_lambda(&qutrit, &orbit, N, &stream(711)).unwrap();
    agrees(&est, delta_el_analytic(&qutrit, orbit.mu()).unwrap(), "delta e_L (d=3)");
}

#[test]
fn estimates_are_reproducible() {
    let ch = zoo::local_amplitude_damping(0.3).unwrap();
    let a = entangling_power(&ch, 3000, &stream(800)).unwrap();
    let b = entangling_power(&ch, 3000, &stream(800)).unwrap();
    assert_eq!(a, b);
    let c = entangling_power(&ch, 3000, &stream(801)).unwrap();
    assert_ne!(a.e_l.mean, c.e_l.mean);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| entangling_power(&ch, 3000, &stream(800)).unwrap());
    assert_eq!(a, serial);
}
