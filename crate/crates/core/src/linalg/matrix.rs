use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Complex double-precision scalar used throughout the crate.
pub type C64 = Complex64;

/// A dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "entry count must equal rows * cols"
        );
        Self { rows, cols, data }
    }

    /// Convenience constructor from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
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

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    /// Kronecker product with `self`'s indices leading (most significant).
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// Largest entry-wise absolute difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// ‖U†U − I‖_max.
    pub fn unitarity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let gram = &self.dagger() * self;
        gram.max_abs_diff(&Self::identity(self.rows))
    }

    /// ‖A − A†‖_max.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// `self ρ self†`, the conjugation used when applying a unitary to a
    /// density matrix.
    pub fn conjugate(&self, rho: &Self) -> Self {
        self * &(rho * &self.dagger())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Expands a unitary acting on `acting_on` into the full `total_qubits`
/// register, identity elsewhere. `acting_on[k]` is the register qubit bound
/// to the k-th (most significant first) qubit of `u`; the list may be in any
/// order and need not be contiguous.
pub fn embed(u: &ComplexMatrix, acting_on: &[usize], total_qubits: usize) -> Result<ComplexMatrix> {
    let k = acting_on.len();
    let sub_dim = 1usize << k;
    if !u.is_square() || u.rows() != sub_dim {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, expected {}x{} for {} qubits",
            u.rows(),
            u.cols(),
            sub_dim,
            sub_dim,
            k
        )));
    }
    for (idx, &q) in acting_on.iter().enumerate() {
        if q >= total_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: total_qubits,
            });
        }
        if acting_on[..idx].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }

    let n = total_qubits;
    let dim = 1usize << n;
    let mut out = ComplexMatrix::zeros(dim, dim);
    // Bit of qubit q within a basis index (qubit 0 is the MSB).
    let bit = |index: usize, q: usize| (index >> (n - 1 - q)) & 1;
    for row in 0..dim {
        let mut i_sub = 0usize;
        for &q in acting_on {
            i_sub = (i_sub << 1) | bit(row, q);
        }
        for j_sub in 0..sub_dim {
            let mut col = row;
            for (pos, &q) in acting_on.iter().enumerate() {
                let b = (j_sub >> (k - 1 - pos)) & 1;
                let mask = 1usize << (n - 1 - q);
                if b == 1 {
                    col |= mask;
                } else {
                    col &= !mask;
                }
            }
            out[(row, col)] = u[(i_sub, j_sub)];
        }
    }
    Ok(out)
}

/// exp(iεK) for Hermitian K, via eigendecomposition so the result is unitary
/// up to rounding.
pub fn exp_i_hermitian(k: &ComplexMatrix, epsilon: f64) -> Result<ComplexMatrix> {
    let tol = 1e-9;
    let deviation = k.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: tol,
        });
    }
    let (values, vectors) = super::hermitian_eigen(k);
    let dim = k.rows();
    let mut phases = ComplexMatrix::zeros(dim, dim);
    for (i, &lambda) in values.iter().enumerate() {
        phases[(i, i)] = C64::from_polar(1.0, epsilon * lambda);
    }
    Ok(&(&vectors * &phases) * &vectors.dagger())
}
