//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)` with the unitary
//!
//! ```text
//! G = [  c            s·e^{iφ} ]
//!     [ -s·e^{-iφ}    c        ]      φ = arg(a_pq)
//! ```
//!
//! which is the real Jacobi rotation conjugated by the phase that makes
//! `a_pq` real. A pair is skipped once `|a_pq| ≤ ε·sqrt(|a_pp·a_qq|)`; this
//! relative criterion is what lets the method resolve small eigenvalues of
//! positive definite inputs to high relative accuracy.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use super::psd::{HermitianMatrix, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_SWEEPS: usize = 100;

/// Spectral decomposition of a validated Hermitian matrix, eigenvalues descending.
pub fn hermitian_eig<T: Real>(m: &HermitianMatrix<T>) -> Result<SpectralDecomposition<T>> {
    jacobi(m.matrix())
}

/// Off-diagonal Frobenius mass.
fn off_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut sum = T::zero();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum = sum + a[(p, q)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Runs cyclic sweeps on the Hermitian matrix `m` (assumed exactly Hermitian).
pub(crate) fn jacobi<T: Real>(m: &ComplexMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();
    let target = T::of(T::EIG_OFF_TOL) * m.frobenius();

    for i in 0..n {
        a[(i, i)].im = T::zero();
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if r <= eps * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                rotate(&mut a, &mut v, p, q, apq / r, r, app, aqq);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }

    if !converged {
        let off = off_norm(&a);
        if off > target {
            return Err(Error::NonConvergence { sweeps: MAX_SWEEPS, off: off.to_f() });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: ties keep the order left by the last sweep.
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).expect("finite eigenvalues"));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, new_col)] = v[(row, old_col)];
        }
    }
    Ok(SpectralDecomposition::from_parts(eigenvalues, vectors))
}

#[allow(clippy::too_many_arguments)]
fn rotate<T: Real>(
    a: &mut ComplexMatrix<T>,
    v: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    phase: Complex<T>,
    r: T,
    app: T,
    aqq: T,
) {
    let n = a.dim();
    let two = T::of(2.0);
    let theta = (aqq - app) / (two * r);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sign = if theta < T::zero() { -T::one() } else { T::one() };
        sign / (theta.abs() + theta.hypot(T::one()))
    };
    let c = T::one() / t.hypot(T::one());
    let s = t * c;
    let sp = phase * s;
    let sp_conj = sp.conj();

    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * sp_conj;
        a[(k, q)] = akp * sp + akq * c;
    }
    // A <- G* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * sp;
        a[(q, k)] = apk * sp_conj + aqk * c;
    }
    let zero = Complex::new(T::zero(), T::zero());
    a[(p, q)] = zero;
    a[(q, p)] = zero;
    a[(p, p)] = Complex::new(app - t * r, T::zero());
    a[(q, q)] = Complex::new(aqq + t * r, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * sp_conj;
        v[(k, q)] = vkp * sp + vkq * c;
    }
}
