//! Dense row-major complex matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{QldpError, Result};

pub type Complex = num_complex::Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// A dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(QldpError::InvalidMatrix("zero dimension"));
        }
        if data.len() != rows * cols {
            return Err(QldpError::InvalidMatrix("entry count does not match shape"));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QldpError::InvalidMatrix("non-finite entry"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cols) {
            return Err(QldpError::InvalidMatrix("ragged rows"));
        }
        Self::new(r, cols, rows.concat())
    }

    /// Convenience constructor from real entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[Complex]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Column vector with the given entries.
    pub fn column(entries: &[Complex]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    /// The rank-one matrix |u⟩⟨v|.
    pub fn outer(u: &[Complex], v: &[Complex]) -> Self {
        let mut data = Vec::with_capacity(u.len() * v.len());
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self {
            rows: u.len(),
            cols: v.len(),
            data,
        }
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(QldpError::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let out_row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * p..(k + 1) * p];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_raw(n, p, out))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if self.cols != v.len() {
            return Err(QldpError::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok(self.mul_vec(v))
    }

    pub(crate) fn mul_vec(&self, v: &[Complex]) -> Vec<Complex> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Adjoint-vector product E†v without forming E†.
    pub(crate) fn adjoint_mul_vec(&self, v: &[Complex]) -> Vec<Complex> {
        let mut out = vec![ZERO; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.data[i * self.cols + j].conj());
            }
        }
        Self::from_raw(self.cols, self.rows, out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.data[i * self.cols + j]);
            }
        }
        Self::from_raw(self.cols, self.rows, out)
    }

    /// Kronecker product.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    let base = (i * other.rows + k) * cols + j * other.cols;
                    for (l, b) in other.row(k).iter().enumerate() {
                        out[base + l] = a * b;
                    }
                }
            }
        }
        Self::from_raw(rows, cols, out)
    }

    pub fn trace(&self) -> Result<Complex> {
        if !self.is_square() {
            return Err(QldpError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.data[i * self.cols + i]).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(Complex::norm_sqr).sum())
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z * s).collect(),
        )
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(Complex, Complex) -> Complex) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(QldpError::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_raw(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// Adds s·|v⟩⟨v| in place (square matrices of matching size only).
    pub(crate) fn add_outer_assign(&mut self, v: &[Complex], s: f64) {
        let n = v.len();
        for i in 0..n {
            let vi = v[i] * s;
            for j in 0..n {
                self.data[i * n + j] += vi * v[j].conj();
            }
        }
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// ‖A − A†‖_F.
    pub fn hermitian_deviation(&self) -> f64 {
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
        libm::sqrt(acc)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= tol * self.frobenius_norm().max(1.0)
    }

    /// (A + A†)/2, used to strip rounding asymmetry.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        let mut out = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
            }
        }
        Self::from_raw(n, n, out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex]) -> f64 {
    libm::sqrt(v.iter().map(Complex::norm_sqr).sum())
}

/// ⟨u|v⟩.
pub fn inner(u: &[Complex], v: &[Complex]) -> Complex {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Hilbert-Schmidt inner product tr(A†B).
pub fn trace_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex {
    debug_assert_eq!(a.shape(), b.shape());
    inner(&a.data, &b.data)
}

/// Kronecker product of two vectors.
pub fn kron_vec(u: &[Complex], v: &[Complex]) -> Vec<Complex> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

/// Pauli matrices and tensor words over them.
pub mod pauli {
    use super::*;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_raw(2, 2, vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_raw(2, 2, vec![ZERO, -I, I, ZERO])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_raw(2, 2, vec![ONE, ZERO, ZERO, -ONE])
    }

    /// Single-qubit Pauli by index 0..4 (I, X, Y, Z).
    pub fn by_index(k: usize) -> ComplexMatrix {
        match k {
            0 => identity(),
            1 => x(),
            2 => y(),
            3 => z(),
            _ => panic!("Pauli index {k} out of range"),
        }
    }

    /// The n-qubit Pauli word whose base-4 digits (most significant qubit
    /// first) encode the single-qubit factors.
    pub fn word(n_qubits: usize, code: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::identity(1);
        for q in (0..n_qubits).rev() {
            let digit = (code >> (2 * q)) & 3;
            out = out.tensor(&by_index(digit));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    fn int_matrix(rows: usize, cols: usize, seed: i64) -> ComplexMatrix {
        let data = (0..rows * cols)
            .map(|k| {
                let v = (k as i64 * 7 + seed * 13) % 11 - 5;
                c(v as f64, ((k as i64 + seed) % 5 - 2) as f64)
            })
            .collect();
        ComplexMatrix::new(rows, cols, data).unwrap()
    }

    #[test]
    fn matmul_examples() {
        assert_eq!(identity().matmul(&x()).unwrap(), x());
        assert_eq!(x().matmul(&x()).unwrap(), ComplexMatrix::identity(2));
        let xz = x().matmul(&z()).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        assert_eq!(xz, expected);
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            a.matmul(&b),
            Err(QldpError::DimensionMismatch { op: "matmul", .. })
        ));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(y().adjoint(), y());
        assert_eq!(z().adjoint(), z());
        let a = ComplexMatrix::new(2, 2, vec![ZERO, I, ZERO, ZERO]).unwrap();
        let expected = ComplexMatrix::new(2, 2, vec![ZERO, ZERO, -I, ZERO]).unwrap();
        assert_eq!(a.adjoint(), expected);
        let m = int_matrix(3, 4, 2);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn tensor_examples() {
        let ket0 = ComplexMatrix::column(&[ONE, ZERO]);
        let ket1 = ComplexMatrix::column(&[ZERO, ONE]);
        assert_eq!(
            ket0.tensor(&ket1),
            ComplexMatrix::column(&[ZERO, ONE, ZERO, ZERO])
        );
        assert_eq!(
            ComplexMatrix::identity(2).tensor(&ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
        assert_eq!(
            z().tensor(&z()),
            ComplexMatrix::diagonal(&[ONE, -ONE, -ONE, ONE])
        );
    }

    #[test]
    fn tensor_is_associative_on_integer_matrices() {
        let a = int_matrix(2, 3, 1);
        let b = int_matrix(3, 2, 4);
        let d = int_matrix(2, 2, 9);
        assert_eq!(a.tensor(&b).tensor(&d), a.tensor(&b.tensor(&d)));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ComplexMatrix::identity(4).trace().unwrap(), c(4.0, 0.0));
        assert_eq!(x().trace().unwrap(), ZERO);
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        let t = ComplexMatrix::outer(&psi, &psi).trace().unwrap();
        assert!((t - ONE).norm() < 1e-15);
        assert!(matches!(
            ComplexMatrix::zeros(2, 3).trace(),
            Err(QldpError::NotSquare { .. })
        ));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn pauli_words() {
        assert_eq!(word(1, 2), y());
        assert_eq!(word(2, 0b0111), x().tensor(&z()));
        for code in 0..16 {
            let p = word(2, code);
            assert_eq!(p.matmul(&p).unwrap(), ComplexMatrix::identity(4));
        }
    }
}
