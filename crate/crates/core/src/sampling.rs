// SPDX-License-Identifier: Apache-2.0

//! Reproducible Haar sampling and Monte Carlo estimation.
//!
//! A [`SampleStream`] is a value `(seed, stream_id, counter)`. It is turned into a
//! ChaCha8 generator keyed by `seed`, with `stream_id` as the nonce and `counter`
//! selecting a block offset, so any sample of any stream can be generated
//! independently of every other one. Monte Carlo estimators give sample `i` the
//! stream `stream.at(i)`; the estimate is therefore independent of how the
//! samples are distributed over threads.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};

/// Words reserved per counter value. One sample never draws anywhere near 2^32 words.
const COUNTER_SHIFT: u32 = 32;
/// Samples per accumulation chunk. Fixed so the reduction order never depends on threads.
pub const MC_CHUNK: u64 = 1024;
/// Default Monte Carlo sample count for scalar diagnostics.
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleStream {
    pub seed: u64,
    pub stream_id: u64,
    pub counter: u64,
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SampleStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        SampleStream { seed, stream_id, counter: 0 }
    }

    /// Independent child stream labelled `k`.
    pub fn child(&self, k: u64) -> SampleStream {
        SampleStream {
            seed: self.seed,
            stream_id: mix64(self.stream_id ^ mix64(k.wrapping_add(0x632b_e59b_d9b4_e019))),
            counter: 0,
        }
    }

    /// The same stream positioned at `counter`.
    pub fn at(&self, counter: u64) -> SampleStream {
        SampleStream { counter, ..*self }
    }

    pub fn rng(&self) -> StreamRng {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(self.stream_id);
        inner.set_word_pos(u128::from(self.counter) << COUNTER_SHIFT);
        StreamRng { inner }
    }
}

/// Generator for one position of a [`SampleStream`].
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard complex normal with independent N(0,1) real and imaginary parts (Box–Muller).
    pub fn complex_normal(&mut self) -> Complex64 {
        // u1 ∈ (0, 1] keeps the logarithm finite.
        let u1 = ((self.inner.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        Complex64::from_polar(r, TAU * u2)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut StreamRng) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| rng.complex_normal()).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("gaussian entries are finite")
}

/// Thin QR of a full-column-rank matrix by twice-iterated modified Gram–Schmidt.
/// Returns `Q` and the diagonal of `R`.
fn qr_thin(m: &ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut q = m.clone();
    let mut r_diag = vec![ZERO; cols];
    for j in 0..cols {
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj = ZERO;
                for i in 0..rows {
                    proj += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..rows {
                    let qik = q[(i, k)];
                    q[(i, j)] -= proj * qik;
                }
            }
        }
        let norm = (0..rows).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        r_diag[j] = Complex64::new(norm, 0.0);
        for i in 0..rows {
            q[(i, j)] /= norm;
        }
    }
    (q, r_diag)
}

/// `Q · diag(r_jj / |r_jj|)`: the phase fix that makes the QR factor Haar distributed.
fn phase_corrected(q: ComplexMatrix, r_diag: &[Complex64]) -> ComplexMatrix {
    let mut q = q;
    for (j, r) in r_diag.iter().enumerate() {
        let phase = r / r.norm();
        for i in 0..q.rows() {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random `d×d` unitary (Ginibre, QR, phase correction).
pub fn haar_unitary(d: usize, rng: &mut StreamRng) -> ComplexMatrix {
    haar_isometry(d, d, rng)
}

/// Haar-random isometry `C^cols → C^rows`: the first `cols` columns of a Haar unitary.
pub fn haar_isometry(rows: usize, cols: usize, rng: &mut StreamRng) -> ComplexMatrix {
    assert!(rows >= cols && cols >= 1, "haar_isometry: need rows >= cols >= 1");
    let g = gaussian_matrix(rows, cols, rng);
    let (q, r_diag) = qr_thin(&g);
    phase_corrected(q, &r_diag)
}

/// Haar-random unit vector in `C^d`, as a column.
pub fn haar_pure_state(d: usize, rng: &mut StreamRng) -> ComplexMatrix {
    let mut v: Vec<Complex64> = (0..d).map(|_| rng.complex_normal()).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    ComplexMatrix::column(&v)
}

/// `|ψ_A> ⊗ |ψ_B>` with independent Haar factors.
pub fn product_state(da: usize, db: usize, rng: &mut StreamRng) -> ComplexMatrix {
    let a = haar_pure_state(da, rng);
    let b = haar_pure_state(db, rng);
    crate::linalg::kron(&a, &b)
}

/// Schmidt coefficients of a pure state on `C^d ⊗ C^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtOrbit {
    lambda: Vec<f64>,
}

impl SchmidtOrbit {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidState("empty Schmidt vector".into()));
        }
        if let Some(&bad) = lambda.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::ParameterOutOfRange { name: "lambda_i", value: bad, range: "[0, 1]" });
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("Schmidt coefficients sum to {sum}")));
        }
        Ok(SchmidtOrbit { lambda })
    }

    /// Two-qubit orbit `cos θ |00> + sin θ |11>`, θ ∈ [0, π/4].
    pub fn from_theta(theta: f64) -> Result<Self> {
        check_theta(theta)?;
        let (s, c) = theta.sin_cos();
        Ok(SchmidtOrbit { lambda: vec![c * c, s * s] })
    }

    pub fn product(d: usize) -> Self {
        let mut lambda = vec![0.0; d];
        lambda[0] = 1.0;
        SchmidtOrbit { lambda }
    }

    pub fn maximally_entangled(d: usize) -> Self {
        SchmidtOrbit { lambda: vec![1.0 / d as f64; d] }
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// Reduced purity `μ = Σ λ_i²`.
    pub fn mu(&self) -> f64 {
        self.lambda.iter().map(|x| x * x).sum()
    }

    /// `Σ √λ_i |ii>`
    pub fn reference_state(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut v = vec![ZERO; d * d];
        for (i, &l) in self.lambda.iter().enumerate() {
            v[i * d + i] = Complex64::new(l.sqrt(), 0.0);
        }
        ComplexMatrix::column(&v)
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    // Small slack so grids ending at π/4 computed in floating point are accepted.
    if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&theta) {
        return Err(Error::ParameterOutOfRange { name: "theta", value: theta, range: "[0, pi/4]" });
    }
    Ok(())
}

/// Reduced purity of the two-qubit orbit at Schmidt angle θ: `1 − sin²(2θ)/2`.
pub fn mu_of_theta(theta: f64) -> f64 {
    1.0 - 0.5 * (2.0 * theta).sin().powi(2)
}

/// `(U_A ⊗ U_B) Σ √λ_i |ii>` with independent Haar unitaries.
pub fn orbit_state(orbit: &SchmidtOrbit, rng: &mut StreamRng) -> ComplexMatrix {
    let d = orbit.dim();
    let ua = haar_unitary(d, rng);
    let ub = haar_unitary(d, rng);
    let mut v = vec![ZERO; d * d];
    for (i, &l) in orbit.lambda.iter().enumerate() {
        if l == 0.0 {
            continue;
        }
        let w = l.sqrt();
        for a in 0..d {
            let x = ua[(a, i)] * w;
            for b in 0..d {
                v[a * d + b] += x * ub[(b, i)];
            }
        }
    }
    ComplexMatrix::column(&v)
}

/// Mean, standard error (population standard deviation over √n) and range of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub min: f64,
    pub max: f64,
}

impl McEstimate {
    /// Exact value (no sampling error).
    pub fn exact(value: f64) -> Self {
        McEstimate { mean: value, stderr: 0.0, n: 0, min: value, max: value }
    }

    /// `(mean − value) / stderr`, or 0 / ∞ when the standard error vanishes.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = self.mean - value;
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        }
    }

    /// `|mean − value| ≤ k·stderr + floor`
    pub fn agrees_with(&self, value: f64, k: f64, floor: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr + floor
    }

    /// `self − c` with the same standard error.
    pub fn shifted(&self, c: f64) -> McEstimate {
        McEstimate { mean: self.mean - c, min: self.min - c, max: self.max - c, ..*self }
    }
}

/// Streaming mean / variance accumulator with an exact pairwise merge (Chan et al.).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McAccumulator {
    n: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Default for McAccumulator {
    fn default() -> Self {
        McAccumulator { n: 0, mean: 0.0, m2: 0.0, min: f64::INFINITY, max: f64::NEG_INFINITY }
    }
}

impl McAccumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&mut self, other: &McAccumulator) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let nf = n as f64;
        self.mean += delta * other.n as f64 / nf;
        self.m2 += other.m2 + delta * delta * (self.n as f64) * (other.n as f64) / nf;
        self.n = n;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn estimate(&self) -> McEstimate {
        let n = self.n.max(1) as f64;
        let variance = (self.m2 / n).max(0.0);
        McEstimate { mean: self.mean, stderr: (variance / n).sqrt(), n: self.n, min: self.min, max: self.max }
    }
}

fn check_samples(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange { name: "samples", value: n as f64, range: ">= 2" });
    }
    Ok(())
}

/// Accumulates `K` observables for samples `start..end` of `stream`, serially.
pub fn accumulate_range<const K: usize, F>(
    stream: &SampleStream,
    start: u64,
    end: u64,
    f: &F,
) -> Result<[McAccumulator; K]>
where
    F: Fn(&mut StreamRng) -> Result<[f64; K]>,
{
    let mut acc = [McAccumulator::default(); K];
    for i in start..end {
        let mut rng = stream.at(i).rng();
        let values = f(&mut rng)?;
        for (a, v) in acc.iter_mut().zip(values) {
            a.push(v);
        }
    }
    Ok(acc)
}

/// Monte Carlo estimate of `K` observables sharing the same random inputs.
///
/// Samples are processed in fixed chunks of [`MC_CHUNK`] that are merged in
/// chunk order, so serial and parallel execution give identical results.
pub fn try_mc_estimate<const K: usize, F>(n: u64, stream: &SampleStream, f: F) -> Result<[McEstimate; K]>
where
    F: Fn(&mut StreamRng) -> Result<[f64; K]> + Sync,
{
    check_samples(n)?;
    let chunks = n.div_ceil(MC_CHUNK);
    let partials: Vec<[McAccumulator; K]> = (0..chunks)
        .into_par_iter()
        .map(|c| accumulate_range(stream, c * MC_CHUNK, ((c + 1) * MC_CHUNK).min(n), &f))
        .collect::<Result<_>>()?;
    let mut total = [McAccumulator::default(); K];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    Ok(total.map(|a| a.estimate()))
}

/// Generic estimator: draws an input with `sampler` and averages `f` over `n` samples.
pub fn mc_mean<T, S, F>(sampler: S, f: F, n: u64, stream: &SampleStream) -> Result<McEstimate>
where
    S: Fn(&mut StreamRng) -> T + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let [est] = try_mc_estimate(n, stream, |rng| Ok([f(&sampler(rng))]))?;
    Ok(est)
}
