// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices for small Hilbert spaces.
//!
//! Storage is row-major. Every bipartite operator is indexed with subsystem A
//! as the most significant digit, so `|a b>` sits at row `a * dB + b`. Two-copy
//! operators on `(C^d ⊗ C^d)^{⊗2}` use the fixed order A, B, A', B'.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension accepted by [`tensor_product`].
pub const MAX_DIM: usize = 256;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Which half of a bipartite system an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Selects the swap operator on the two-copy space A, B, A', B'.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapPair {
    /// `S_{AA'}`
    AA,
    /// `S_{BB'}`
    BB,
    /// `S_{AA'} S_{BB'}`
    Both,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::DimensionMismatch("non-finite entry".into()));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Row-major real entries. Panics on a length mismatch; meant for literals.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "from_real: wrong number of entries");
        ComplexMatrix {
            rows,
            cols,
            data: data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    /// Row-major complex entries. Panics on a length mismatch; meant for literals.
    pub fn from_complex(rows: usize, cols: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), rows * cols, "from_complex: wrong number of entries");
        ComplexMatrix { rows, cols, data: data.to_vec() }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let v: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// Column vector.
    pub fn column(entries: &[Complex64]) -> Self {
        ComplexMatrix { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    /// Computational basis vector `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim, 1);
        v.data[index] = ONE;
        v
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: Complex64, other: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add_scaled: shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = Self::zeros(n, m);
        for i in 0..n {
            let out_row = &mut out.data[i * m..(i + 1) * m];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[l * m..(l + 1) * m];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self · rhs†` without materialising the adjoint.
    pub fn matmul_adjoint(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.cols, "matmul_adjoint: inner dimensions differ");
        let (n, k, m) = (self.rows, self.cols, rhs.rows);
        let mut out = Self::zeros(n, m);
        for i in 0..n {
            let a = &self.data[i * k..(i + 1) * k];
            for j in 0..m {
                let b = &rhs.data[j * k..(j + 1) * k];
                let mut acc = ZERO;
                for (x, y) in a.iter().zip(b) {
                    acc += x * y.conj();
                }
                out.data[i * m + j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_F`
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "distance: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖H − H†‖_F`
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Hermitian part `(H + H†)/2`, used to scrub rounding asymmetry.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = 0.5 * (self.data[i * n + j] + self.data[j * n + i].conj());
            }
        }
        out
    }

    /// `‖U U† − 1‖_F`
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.matmul_adjoint(self).distance(&Self::identity(self.rows))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "max_abs_diff: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Euclidean norm of a vector (any shape, all entries).
    pub fn vector_norm(&self) -> f64 {
        self.frobenius_norm()
    }

    /// `|ψ><ψ|` for a column vector.
    pub fn outer(psi: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(psi.cols, 1);
        let n = psi.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            let a = psi.data[i];
            for j in 0..n {
                out.data[i * n + j] = a * psi.data[j].conj();
            }
        }
        out
    }

    /// `<φ|ψ>` for column vectors.
    pub fn inner(phi: &ComplexMatrix, psi: &ComplexMatrix) -> Complex64 {
        debug_assert_eq!(phi.data.len(), psi.data.len());
        phi.data.iter().zip(&psi.data).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.data[i * self.cols + j];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::DimensionTooLarge { rows, cols, max: MAX_DIM });
    }
    Ok(kron(a, b))
}

/// Unchecked Kronecker product for internal callers whose sizes are known to be small.
pub(crate) fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.data[i * a.cols + j];
            if x == ZERO {
                continue;
            }
            for k in 0..b.rows {
                let row = i * b.rows + k;
                let dst = &mut out.data[row * cols + j * b.cols..row * cols + (j + 1) * b.cols];
                let src = &b.data[k * b.cols..(k + 1) * b.cols];
                for (o, y) in dst.iter_mut().zip(src) {
                    *o = x * y;
                }
            }
        }
    }
    out
}

fn check_bipartite(rho: &ComplexMatrix, da: usize, db: usize) -> Result<()> {
    if !rho.is_square() || rho.rows != da * db || da == 0 || db == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected a square {n}x{n} operator for dA={da}, dB={db}, got {}x{}",
            rho.rows,
            rho.cols,
            n = da * db
        )));
    }
    Ok(())
}

/// Reduced operator on the kept subsystem.
pub fn partial_trace(rho: &ComplexMatrix, da: usize, db: usize, keep: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(rho, da, db)?;
    Ok(partial_trace_unchecked(rho, da, db, keep))
}

pub(crate) fn partial_trace_unchecked(rho: &ComplexMatrix, da: usize, db: usize, keep: Subsystem) -> ComplexMatrix {
    let n = da * db;
    match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(da, da);
            for a in 0..da {
                for a2 in 0..da {
                    let mut acc = ZERO;
                    for b in 0..db {
                        acc += rho.data[(a * db + b) * n + a2 * db + b];
                    }
                    out.data[a * da + a2] = acc;
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(db, db);
            for b in 0..db {
                for b2 in 0..db {
                    let mut acc = ZERO;
                    for a in 0..da {
                        acc += rho.data[(a * db + b) * n + a * db + b2];
                    }
                    out.data[b * db + b2] = acc;
                }
            }
            out
        }
    }
}

/// `ρ^{T_B}`: transposes the B indices of every block.
pub fn partial_transpose_b(rho: &ComplexMatrix, da: usize, db: usize) -> Result<ComplexMatrix> {
    check_bipartite(rho, da, db)?;
    Ok(partial_transpose_b_unchecked(rho, da, db))
}

pub(crate) fn partial_transpose_b_unchecked(rho: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    out.data[(a * db + b) * n + a2 * db + b2] = rho.data[(a * db + b2) * n + a2 * db + b];
                }
            }
        }
    }
    out
}

/// Permutation of basis indices on `(C^d ⊗ C^d)^{⊗2}` ordered A, B, A', B'.
///
/// Returns `perm` with `S |i> = |perm[i]>`.
pub(crate) fn swap_permutation(d: usize, which: SwapPair) -> Vec<usize> {
    let n = d * d * d * d;
    let mut perm = vec![0; n];
    for (idx, slot) in perm.iter_mut().enumerate() {
        let bp = idx % d;
        let ap = (idx / d) % d;
        let b = (idx / (d * d)) % d;
        let a = idx / (d * d * d);
        let (a, ap) = match which {
            SwapPair::AA | SwapPair::Both => (ap, a),
            SwapPair::BB => (a, ap),
        };
        let (b, bp) = match which {
            SwapPair::BB | SwapPair::Both => (bp, b),
            SwapPair::AA => (b, bp),
        };
        *slot = ((a * d + b) * d + ap) * d + bp;
    }
    perm
}

/// Swap operator on the two-copy space A, B, A', B'.
pub fn swap_operator(d: usize, which: SwapPair) -> ComplexMatrix {
    let perm = swap_permutation(d, which);
    let n = perm.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (col, &row) in perm.iter().enumerate() {
        out.data[row * n + col] = ONE;
    }
    out
}

/// `Tr(A B)` in O(n²).
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.cols, b.rows, "trace_product: inner dimensions differ");
    assert_eq!(a.rows, b.cols, "trace_product: result not square");
    let mut acc = ZERO;
    for i in 0..a.rows {
        for k in 0..a.cols {
            acc += a.data[i * a.cols + k] * b.data[k * b.cols + i];
        }
    }
    acc
}

/// `Tr(ρ²)`, real part. The imaginary part vanishes for Hermitian input.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    let n = rho.rows;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = rho.data[i * n + j];
            let y = rho.data[j * n + i];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// Pauli matrices and a few gates used throughout.
pub mod gates {
    use super::*;

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_complex(2, 2, &[ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// `diag(1, 1, 1, e^{iφ})`
    pub fn controlled_phase(phi: f64) -> ComplexMatrix {
        ComplexMatrix::diag(&[ONE, ONE, ONE, Complex64::from_polar(1.0, phi)])
    }

    pub fn cz() -> ComplexMatrix {
        ComplexMatrix::real_diag(&[1.0, 1.0, 1.0, -1.0])
    }

    /// `σ_y ⊗ σ_y`
    pub fn yy() -> ComplexMatrix {
        kron(&pauli_y(), &pauli_y())
    }
}
