//! Functional calculus on PSD matrices: powers, polar factors, singular values,
//! and the closed-form 2×2 square root.

use super::matrix::ComplexMatrix;
use super::psd::{HermitianMatrix, PsdMatrix};
use super::svd::left_svd;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `A^t = U diag(λᵢᵗ) U*`, with `0ᵗ = 0` for `t > 0` and `0⁰ = 1`.
pub fn matrix_power<T: Real>(a: &PsdMatrix<T>, t: T) -> Result<PsdMatrix<T>> {
    if !t.is_finite() {
        return Err(Error::InvalidExponent(format!("exponent {t} is not finite")));
    }
    if t == T::one() {
        return Ok(a.clone());
    }
    let eig = a.eigenvalues();
    if t < T::zero() {
        let threshold = a.zero_threshold();
        if eig.iter().any(|&l| l <= threshold) {
            return Err(Error::SingularPower { exponent: t.to_f() });
        }
    }
    let values = eig
        .iter()
        .map(|&l| {
            if t == T::zero() {
                T::one()
            } else if l == T::zero() {
                T::zero()
            } else {
                l.powf(t)
            }
        })
        .collect();
    Ok(PsdMatrix::from_spectral(values, a.spectral().vectors().clone()))
}

/// `X*X` as a validated PSD matrix.
pub fn gram<T: Real>(x: &ComplexMatrix<T>) -> Result<PsdMatrix<T>> {
    PsdMatrix::new(HermitianMatrix::symmetrized(&(&x.adjoint() * x)))
}

/// Polar decomposition `X = U·|X|`.
///
/// `|X| = (X*X)^{1/2}` comes from the eigendecomposition of `X*X`. `U` is the
/// partial isometry `Σ (X vᵢ / σᵢ) vᵢ*` over singular values above
/// `dim·ε·σ_max`; the remaining directions get zero columns, so `U*U` is the
/// support projection of `|X|`.
pub fn polar_factors<T: Real>(x: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, PsdMatrix<T>)> {
    let n = x.dim();
    let xx = gram(x)?;
    let abs = matrix_power(&xx, T::of(0.5))?;
    let sigma = abs.eigenvalues();
    let v = abs.spectral().vectors();
    let cutoff = T::of(n as f64) * T::epsilon() * sigma[0];
    let xv = x * v;
    let mut u = ComplexMatrix::zeros(n);
    for (k, &s) in sigma.iter().enumerate() {
        if s <= cutoff || s == T::zero() {
            continue;
        }
        for i in 0..n {
            let w = xv[(i, k)] / s;
            for j in 0..n {
                u[(i, j)] = u[(i, j)] + w * v[(j, k)].conj();
            }
        }
    }
    Ok((u, abs))
}

/// Singular values of `X`, descending.
///
/// These are the square roots of the eigenvalues of `X*X`; they are computed
/// by one-sided Jacobi on a pivoted QR factor so that small values keep their
/// relative accuracy instead of being limited to `√ε·σ_max`.
pub fn singular_values<T: Real>(x: &ComplexMatrix<T>) -> Result<Vec<T>> {
    Ok(left_svd(x)?.values)
}

/// Principal square root of a 2×2 positive definite matrix:
/// `(M + √det(M)·I) / √(tr M + 2√det M)`.
pub fn sqrt2x2_closed<T: Real>(m: &PsdMatrix<T>) -> Result<PsdMatrix<T>> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: m.dim() });
    }
    let a = m.matrix();
    let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).re;
    let tr = a.trace().re;
    if !(det > T::zero()) {
        return Err(Error::NotPositiveDefinite(format!("determinant {det} is not positive")));
    }
    if !(tr > T::zero()) {
        return Err(Error::NotPositiveDefinite(format!("trace {tr} is not positive")));
    }
    let root_det = det.sqrt();
    let shifted = a + &ComplexMatrix::identity(2).scale(root_det);
    let root = shifted.scale(T::one() / (tr + T::of(2.0) * root_det).sqrt());
    PsdMatrix::from_matrix(root)
}
