// SPDX-License-Identifier: Apache-2.0

//! Bipartite quantum channels in Kraus form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace_unchecked, ComplexMatrix, Subsystem, ZERO};
use crate::state::check_density_matrix;

/// Tolerance on `‖Σ K†K − I‖_F` for a channel to count as trace preserving.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// A channel `ρ ↦ Σ K_α ρ K_α†` on `C^dA ⊗ C^dB`.
///
/// The invariants `T = Σ|Tr K_α|²`, `M_A = Σ ‖Tr_B K_α‖²_F` and
/// `M_B = Σ ‖Tr_A K_α‖²_F` are computed once at construction.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    da: usize,
    db: usize,
    kraus: Vec<ComplexMatrix>,
    t: f64,
    m_a: f64,
    m_b: f64,
}

/// Outcome of [`KrausChannel::validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub d_a: usize,
    pub d_b: usize,
    pub kraus_count: usize,
    pub completeness_residual: f64,
    pub t: f64,
    pub m_a: f64,
    pub m_b: f64,
    pub passed: bool,
}

impl KrausChannel {
    /// Builds a channel after checking shapes. Trace preservation is not enforced
    /// here; see [`KrausChannel::validate`] and [`KrausChannel::ensure_valid`].
    pub fn new(da: usize, db: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if da == 0 || db == 0 {
            return Err(Error::InvalidChannel("local dimensions must be positive".into()));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("empty Kraus list".into()));
        }
        let dim = da * db;
        if let Some((i, k)) = kraus.iter().enumerate().find(|(_, k)| k.rows() != dim || k.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator {i} is {}x{}, expected {dim}x{dim}",
                k.rows(),
                k.cols()
            )));
        }
        let mut t = 0.0;
        let mut m_a = 0.0;
        let mut m_b = 0.0;
        for k in &kraus {
            t += k.trace().norm_sqr();
            m_a += squared_norm(&partial_trace_unchecked(k, da, db, Subsystem::A));
            m_b += squared_norm(&partial_trace_unchecked(k, da, db, Subsystem::B));
        }
        Ok(KrausChannel { da, db, kraus, t, m_a, m_b })
    }

    /// Conjugation by a unitary, `ρ ↦ UρU†`.
    pub fn unitary(da: usize, db: usize, u: ComplexMatrix) -> Result<Self> {
        check_unitary(&u)?;
        KrausChannel::new(da, db, vec![u])
    }

    pub fn identity(da: usize, db: usize) -> Self {
        KrausChannel::new(da, db, vec![ComplexMatrix::identity(da * db)]).expect("identity is well formed")
    }

    pub fn d_a(&self) -> usize {
        self.da
    }

    pub fn d_b(&self) -> usize {
        self.db
    }

    /// Total dimension `D = dA·dB`.
    pub fn dim(&self) -> usize {
        self.da * self.db
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn m_a(&self) -> f64 {
        self.m_a
    }

    pub fn m_b(&self) -> f64 {
        self.m_b
    }

    pub fn is_two_qubit(&self) -> bool {
        self.da == 2 && self.db == 2
    }

    /// `‖Σ K†K − I‖_F`
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &self.kraus {
            sum += &k.adjoint().matmul(k);
        }
        sum.distance(&ComplexMatrix::identity(dim))
    }

    pub fn validate(&self) -> ValidationReport {
        let residual = self.completeness_residual();
        ValidationReport {
            d_a: self.da,
            d_b: self.db,
            kraus_count: self.kraus.len(),
            completeness_residual: residual,
            t: self.t,
            m_a: self.m_a,
            m_b: self.m_b,
            passed: residual <= COMPLETENESS_TOL,
        }
    }

    /// Errors unless the channel is trace preserving within [`COMPLETENESS_TOL`].
    pub fn ensure_valid(&self) -> Result<()> {
        let residual = self.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel(format!("completeness residual {residual:.3e} exceeds 1e-9")));
        }
        Ok(())
    }

    /// `Φ(ρ)` for a validated density matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_density_matrix(rho, self.dim())?;
        Ok(self.apply_unchecked(rho))
    }

    /// `Φ(ρ)` without validating `ρ`.
    pub fn apply_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let dim = self.dim();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for k in &self.kraus {
            out += &k.matmul(rho).matmul_adjoint(k);
        }
        out
    }

    /// `Φ(|ψ><ψ|) = Σ (K_α ψ)(K_α ψ)†` for a unit column vector `ψ`.
    pub fn apply_pure(&self, psi: &ComplexMatrix) -> ComplexMatrix {
        let dim = self.dim();
        debug_assert_eq!(psi.rows(), dim);
        let mut out = vec![ZERO; dim * dim];
        let mut v = vec![ZERO; dim];
        let x = psi.as_slice();
        for k in &self.kraus {
            for (i, vi) in v.iter_mut().enumerate() {
                *vi = k.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
            }
            for i in 0..dim {
                for j in 0..dim {
                    out[i * dim + j] += v[i] * v[j].conj();
                }
            }
        }
        ComplexMatrix::from_complex(dim, dim, &out)
    }

    /// The `D×m` matrix with columns `K_α ψ`, so that `Φ(|ψ><ψ|) = WW†`.
    pub fn pure_output_factor(&self, psi: &ComplexMatrix) -> ComplexMatrix {
        let dim = self.dim();
        let m = self.kraus.len();
        let x = psi.as_slice();
        let mut w = ComplexMatrix::zeros(dim, m);
        for (a, k) in self.kraus.iter().enumerate() {
            for i in 0..dim {
                w[(i, a)] = k.row(i).iter().zip(x).map(|(p, q)| p * q).sum();
            }
        }
        w
    }

    /// `<ψ|Φ(|ψ><ψ|)|ψ> = Σ |<ψ|K_α|ψ>|²`
    pub fn pure_fidelity(&self, psi: &ComplexMatrix) -> f64 {
        let x = psi.as_slice();
        self.kraus
            .iter()
            .map(|k| {
                let mut amp = ZERO;
                for (i, xi) in x.iter().enumerate() {
                    let row: Complex64 = k.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                    amp += xi.conj() * row;
                }
                amp.norm_sqr()
            })
            .sum()
    }

    /// `after ∘ before`, with Kraus operators `A_β B_α`.
    pub fn compose(after: &KrausChannel, before: &KrausChannel) -> Result<KrausChannel> {
        check_same_dims(after, before)?;
        let mut kraus = Vec::with_capacity(after.kraus.len() * before.kraus.len());
        for a in &after.kraus {
            for b in &before.kraus {
                kraus.push(a.matmul(b));
            }
        }
        KrausChannel::new(after.da, after.db, kraus)
    }

    /// `pΦ_a + (1−p)Φ_b`. Zero-weight branches are dropped.
    pub fn mix(p: f64, a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ParameterOutOfRange { name: "p", value: p, range: "[0, 1]" });
        }
        check_same_dims(a, b)?;
        let mut kraus = Vec::with_capacity(a.kraus.len() + b.kraus.len());
        if p > 0.0 {
            kraus.extend(a.kraus.iter().map(|k| k.scale_real(p.sqrt())));
        }
        if p < 1.0 {
            kraus.extend(b.kraus.iter().map(|k| k.scale_real((1.0 - p).sqrt())));
        }
        KrausChannel::new(a.da, a.db, kraus)
    }

    /// The error channel `Ad_{U†} ∘ Φ` relative to a unitary target.
    pub fn error_channel(&self, target: &ComplexMatrix) -> Result<KrausChannel> {
        if target.rows() != self.dim() || target.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "target is {}x{}, channel dimension is {}",
                target.rows(),
                target.cols(),
                self.dim()
            )));
        }
        check_unitary(target)?;
        let ud = target.adjoint();
        KrausChannel::new(self.da, self.db, self.kraus.iter().map(|k| ud.matmul(k)).collect())
    }

    /// Unnormalised Choi matrix `Σ_{ij} |i><j| ⊗ Φ(|i><j|)`.
    pub fn choi(&self) -> ComplexMatrix {
        let dim = self.dim();
        let n = dim * dim;
        let mut out = vec![ZERO; n * n];
        let mut v = vec![ZERO; n];
        for k in &self.kraus {
            // v[(i, r)] = K[r, i], so Σ v v† has entries Φ(|i><j|)_{rs} at ((i, r), (j, s)).
            for i in 0..dim {
                for r in 0..dim {
                    v[i * dim + r] = k[(r, i)];
                }
            }
            for p in 0..n {
                if v[p] == ZERO {
                    continue;
                }
                for q in 0..n {
                    out[p * n + q] += v[p] * v[q].conj();
                }
            }
        }
        ComplexMatrix::from_complex(n, n, &out)
    }

    /// Frobenius distance between Choi matrices; zero iff the channels act identically.
    pub fn choi_distance(&self, other: &KrausChannel) -> Result<f64> {
        check_same_dims(self, other)?;
        Ok(self.choi().distance(&other.choi()))
    }

    /// Extensional equality: Choi matrices agree within `tol`.
    pub fn approx_eq(&self, other: &KrausChannel, tol: f64) -> bool {
        self.choi_distance(other).map(|d| d <= tol).unwrap_or(false)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ChannelJson::from(self)).expect("channel serialisation cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&ChannelJson::from(self)).expect("channel serialisation cannot fail")
    }

    /// Parses the JSON channel format. Shapes are checked; trace preservation is not.
    pub fn from_json(text: &str) -> Result<KrausChannel> {
        let parsed: ChannelJson = serde_json::from_str(text)?;
        parsed.try_into()
    }
}

fn squared_norm(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

fn check_same_dims(a: &KrausChannel, b: &KrausChannel) -> Result<()> {
    if a.da != b.da || a.db != b.db {
        return Err(Error::DimensionMismatch(format!(
            "channels act on {}x{} and {}x{}",
            a.da, a.db, b.da, b.db
        )));
    }
    Ok(())
}

/// Errors unless `‖UU† − I‖_F ≤ 1e-10`.
pub fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::NotUnitary { residual: f64::INFINITY });
    }
    let residual = u.unitarity_residual();
    if residual > 1e-10 {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// On-disk channel format: each Kraus operator is a list of rows of `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelJson {
    #[serde(rename = "dA")]
    da: usize,
    #[serde(rename = "dB")]
    db: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&KrausChannel> for ChannelJson {
    fn from(ch: &KrausChannel) -> Self {
        let kraus = ch
            .kraus
            .iter()
            .map(|k| (0..k.rows()).map(|i| k.row(i).iter().map(|z| [z.re, z.im]).collect()).collect())
            .collect();
        ChannelJson { da: ch.da, db: ch.db, kraus }
    }
}

impl TryFrom<ChannelJson> for KrausChannel {
    type Error = Error;

    fn try_from(json: ChannelJson) -> Result<Self> {
        let dim = json.da * json.db;
        let mut kraus = Vec::with_capacity(json.kraus.len());
        for (idx, rows) in json.kraus.into_iter().enumerate() {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch(format!("Kraus operator {idx} is not {dim}x{dim}")));
            }
            let data = rows.into_iter().flatten().map(|[re, im]| Complex64::new(re, im)).collect();
            kraus.push(ComplexMatrix::from_vec(dim, dim, data)?);
        }
        KrausChannel::new(json.da, json.db, kraus)
    }
}
