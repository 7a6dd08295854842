//! Validated Hermitian and positive semidefinite matrices.

use serde::Serialize;

use super::eig::hermitian_eig;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenvalues sorted descending with the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    vectors: ComplexMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub(crate) fn from_parts(eigenvalues: Vec<T>, vectors: ComplexMatrix<T>) -> Self {
        Self { eigenvalues, vectors }
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &ComplexMatrix<T> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(f(λ)) V*` without symmetrization.
    pub fn compose(&self, values: &[T]) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in values.iter().enumerate() {
            if lambda == T::zero() {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * lambda;
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.compose(&self.eigenvalues)
    }
}

/// A matrix known to satisfy `M = M*` exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent, bound = "T: Real")]
pub struct HermitianMatrix<T> {
    inner: ComplexMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Accepts `m` when `‖M − M*‖_F ≤ tol·max(1, ‖M‖_F)` and stores `(M + M*)/2`.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        if !m.is_finite() {
            // Re-run the checked constructor purely for its located error.
            ComplexMatrix::new(m.dim(), m.entries().to_vec())?;
        }
        let defect = (&m - &m.adjoint()).frobenius();
        let bound = T::of(T::HERM_TOL) * m.frobenius().max(T::one());
        if defect > bound {
            return Err(Error::NotHermitian { defect: defect.to_f(), bound: bound.to_f() });
        }
        Ok(Self::symmetrized(&m))
    }

    /// Symmetrizes without a tolerance check, for products that are Hermitian in exact arithmetic.
    pub(crate) fn symmetrized(m: &ComplexMatrix<T>) -> Self {
        let mut inner = m.hermitian_part();
        for i in 0..inner.dim() {
            inner[(i, i)].im = T::zero();
        }
        Self { inner }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn into_inner(self) -> ComplexMatrix<T> {
        self.inner
    }
}

/// Positive semidefinite Hermitian matrix with its cached eigendecomposition.
///
/// Eigenvalues in `[-ε·max(1, λ_max), 0)` are clamped to zero; when that
/// happens the stored matrix is replaced by the clamped reconstruction so the
/// matrix and its spectrum always agree.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdMatrix<T> {
    herm: HermitianMatrix<T>,
    spectral: SpectralDecomposition<T>,
}

impl<T: Real> PsdMatrix<T> {
    pub fn new(herm: HermitianMatrix<T>) -> Result<Self> {
        let spectral = hermitian_eig(&herm)?;
        let m = herm.matrix();
        let scale = m.frobenius().max(T::one());
        let err = (&spectral.reconstruct() - m).frobenius();
        let recon_bound = T::of(T::RECON_TOL) * scale;
        if err > recon_bound {
            return Err(Error::Reconstruction { error: err.to_f(), bound: recon_bound.to_f() });
        }

        let lambda_max = spectral.eigenvalues[0];
        let bound = T::of(T::PSD_TOL) * lambda_max.max(T::one());
        let lambda_min = *spectral.eigenvalues.last().expect("dim >= 1");
        if lambda_min < -bound {
            return Err(Error::NotPsd { eigenvalue: lambda_min.to_f(), bound: bound.to_f() });
        }
        if lambda_min >= T::zero() {
            return Ok(Self { herm, spectral });
        }
        let clamped: Vec<T> = spectral.eigenvalues.iter().map(|&l| l.max(T::zero())).collect();
        Ok(Self::from_spectral(clamped, spectral.vectors))
    }

    /// Validates an arbitrary matrix as Hermitian and then PSD.
    pub fn from_matrix(m: ComplexMatrix<T>) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn from_real_rows(rows: &[&[T]]) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::from_real_rows(rows))
    }

    pub fn from_diag(diag: &[T]) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::from_diag(diag))
    }

    /// Trusted construction from nonnegative eigenvalues and orthonormal columns.
    pub(crate) fn from_spectral(values: Vec<T>, vectors: ComplexMatrix<T>) -> Self {
        debug_assert!(values.iter().all(|&l| l >= T::zero()));
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).expect("finite eigenvalues"));
        let eigenvalues: Vec<T> = order.iter().map(|&i| values[i]).collect();
        let mut sorted = ComplexMatrix::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                sorted[(row, new_col)] = vectors[(row, old_col)];
            }
        }
        let spectral = SpectralDecomposition::from_parts(eigenvalues, sorted);
        let herm = HermitianMatrix::symmetrized(&spectral.reconstruct());
        Self { herm, spectral }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.herm.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix<T> {
        &self.herm
    }

    pub fn spectral(&self) -> &SpectralDecomposition<T> {
        &self.spectral
    }

    pub fn eigenvalues(&self) -> &[T] {
        self.spectral.eigenvalues()
    }

    pub fn dim(&self) -> usize {
        self.herm.dim()
    }

    pub fn trace(&self) -> T {
        self.matrix().trace().re
    }

    pub fn lambda_max(&self) -> T {
        self.spectral.eigenvalues[0]
    }

    /// Threshold at or below which an eigenvalue counts as zero.
    pub fn zero_threshold(&self) -> T {
        T::of(T::PSD_TOL) * self.lambda_max().max(T::one())
    }

    /// `λ_max / λ_min`; infinite for singular matrices.
    pub fn condition(&self) -> T {
        let min = *self.spectral.eigenvalues.last().expect("dim >= 1");
        if min <= T::zero() {
            T::infinity()
        } else {
            self.lambda_max() / min
        }
    }

    /// Congruence `U M U*` by a unitary `U`, reusing the rotated spectrum.
    pub fn unitary_congruence(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.dim() });
        }
        let rotated = u * self.spectral.vectors();
        Ok(Self::from_spectral(self.spectral.eigenvalues.clone(), rotated))
    }

    /// `t·M` for `t ≥ 0`.
    pub fn scaled(&self, t: T) -> Result<Self> {
        if !(t >= T::zero() && t.is_finite()) {
            return Err(Error::InvalidExponent(format!("scale factor {t} must be finite and nonnegative")));
        }
        let values = self.spectral.eigenvalues.iter().map(|&l| l * t).collect();
        Ok(Self::from_spectral(values, self.spectral.vectors.clone()))
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.herm.into_inner()
    }
}

impl<T: Real> Serialize for PsdMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix().serialize(s)
    }
}

impl<'de, T: Real> serde::Deserialize<'de> for PsdMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        PsdMatrix::from_matrix(m).map_err(serde::de::Error::custom)
    }
}
