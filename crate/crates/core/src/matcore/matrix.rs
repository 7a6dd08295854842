//! Dense square complex matrices and their JSON wire format.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense `dim × dim` complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("dim must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Format(format!(
                "entries holds {} values, expected dim^2 = {}",
                entries.len(),
                dim * dim
            )));
        }
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k / dim, col: k % dim });
        }
        Ok(Self { dim, entries })
    }

    pub(crate) fn from_raw(dim: usize, entries: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(dim, vec![Complex::new(T::zero(), T::zero()); dim * dim])
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[T]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex::new(x, T::zero());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_raw(self.dim, self.entries.iter().map(|z| z * s).collect())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius(&self) -> T {
        // Scaled accumulation keeps huge or tiny entries from overflowing.
        let big = self.entries.iter().fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
        if big == T::zero() {
            return T::zero();
        }
        let sum = self.entries.iter().fold(T::zero(), |acc, z| {
            let (a, b) = (z.re / big, z.im / big);
            acc + a * a + b * b
        });
        big * sum.sqrt()
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::of(0.5);
        let adj = self.adjoint();
        Self::from_raw(self.dim, self.entries.iter().zip(&adj.entries).map(|(a, b)| (a + b) * half).collect())
    }

    pub fn col(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Lossy conversion between scalar types.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix::from_raw(
            self.dim,
            self.entries.iter().map(|z| Complex::new(U::of(z.re.to_f()), U::of(z.im.to_f()))).collect(),
        )
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self * other)
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.entries[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.entries[i * self.dim + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix::from_raw(self.dim, self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect())
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix::from_raw(self.dim, self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect())
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// On-disk form: `{"dim": n, "entries": [[re, im], ...]}` with `n²` row-major pairs.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl<T: Real> Serialize for ComplexMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { dim: self.dim, entries: self.entries.iter().map(|z| [z.re.to_f(), z.im.to_f()]).collect() }
            .serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for ComplexMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let entries = raw.entries.iter().map(|&[re, im]| Complex::new(T::of(re), T::of(im))).collect();
        ComplexMatrix::new(raw.dim, entries).map_err(serde::de::Error::custom)
    }
}
