//! Singular values and left singular vectors with high relative accuracy.
//!
//! Rows are sorted by decreasing norm, a Householder QR with column pivoting
//! is taken, and one-sided (Hestenes) Jacobi orthogonalizes the columns of
//! `R*`. For matrices of the form `D₁·W·D₂` with `W` well conditioned and
//! `D₁`, `D₂` diagonal, this resolves tiny singular values to nearly full
//! relative precision, where an eigendecomposition of `Y·Y*` would lose them
//! below `ε·σ_max`.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// `Y = L·diag(σ)·R*` for some `R` with orthonormal columns on the support.
#[derive(Clone, Debug)]
pub struct LeftSvd<T> {
    pub values: Vec<T>,
    pub left: ComplexMatrix<T>,
}

fn col_norm_sqr<T: Real>(m: &ComplexMatrix<T>, j: usize, from: usize) -> T {
    (from..m.dim()).fold(T::zero(), |acc, i| acc + m[(i, j)].norm_sqr())
}

fn col_norm<T: Real>(m: &ComplexMatrix<T>, j: usize) -> T {
    let big = (0..m.dim()).fold(T::zero(), |b, i| b.max(m[(i, j)].norm()));
    if big == T::zero() {
        return T::zero();
    }
    let s = (0..m.dim()).fold(T::zero(), |acc, i| acc + (m[(i, j)] / big).norm_sqr());
    big * s.sqrt()
}

/// Householder QR with column pivoting: returns `(Q, R)` with `Y·P = Q·R`.
fn pivoted_qr<T: Real>(y: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = y.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let two = T::of(2.0);
    let mut r = y.clone();
    let mut q = ComplexMatrix::identity(n);

    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&a, &b| col_norm_sqr(&r, a, k).partial_cmp(&col_norm_sqr(&r, b, k)).expect("finite"))
            .expect("nonempty range");
        if pivot != k {
            for i in 0..n {
                let tmp = r[(i, k)];
                r[(i, k)] = r[(i, pivot)];
                r[(i, pivot)] = tmp;
            }
        }

        let big = (k..n).fold(T::zero(), |b, i| b.max(r[(i, k)].norm()));
        if big == T::zero() {
            continue;
        }
        let x_norm = big * (k..n).fold(T::zero(), |acc, i| acc + (r[(i, k)] / big).norm_sqr()).sqrt();
        let x0 = r[(k, k)];
        let phase = if x0.norm() == T::zero() { Complex::new(T::one(), T::zero()) } else { x0 / x0.norm() };
        let alpha = -phase * x_norm;
        let mut v: Vec<Complex<T>> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] = x0 - alpha;
        let v_norm_sqr = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if v_norm_sqr == T::zero() {
            continue;
        }
        let tau = two / v_norm_sqr;

        for j in k + 1..n {
            let w = v.iter().enumerate().fold(zero, |acc, (off, vi)| acc + vi.conj() * r[(k + off, j)]);
            let w = w * tau;
            for (off, vi) in v.iter().enumerate() {
                r[(k + off, j)] = r[(k + off, j)] - vi * w;
            }
        }
        r[(k, k)] = alpha;
        for i in k + 1..n {
            r[(i, k)] = zero;
        }

        for i in 0..n {
            let w = v.iter().enumerate().fold(zero, |acc, (off, vi)| acc + q[(i, k + off)] * vi);
            let w = w * tau;
            for (off, vi) in v.iter().enumerate() {
                q[(i, k + off)] = q[(i, k + off)] - w * vi.conj();
            }
        }
    }
    (q, r)
}

/// One-sided Jacobi on the columns of `z`; returns the accumulated unitary.
fn hestenes<T: Real>(z: &mut ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = z.dim();
    let zero = Complex::new(T::zero(), T::zero());
    // Column cosines below sqrt(n)·ε are at the rounding floor of the inner
    // products; demanding less than that makes sweeps cycle forever.
    let tol = T::epsilon() * T::of(n as f64).sqrt();
    let mut j_acc = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = col_norm_sqr(z, p, 0);
                let beta = col_norm_sqr(z, q, 0);
                let gamma = (0..n).fold(zero, |acc, i| acc + z[(i, p)].conj() * z[(i, q)]);
                let r = gamma.norm();
                if r == T::zero() || r <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let phase = gamma / r;
                let theta = (beta - alpha) / (T::of(2.0) * r);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let sign = if theta < T::zero() { -T::one() } else { T::one() };
                    sign / (theta.abs() + theta.hypot(T::one()))
                };
                let c = T::one() / t.hypot(T::one());
                let sp = phase * (t * c);
                let sp_conj = sp.conj();
                for m in [&mut *z, &mut j_acc] {
                    for k in 0..n {
                        let mkp = m[(k, p)];
                        let mkq = m[(k, q)];
                        m[(k, p)] = mkp * c - mkq * sp_conj;
                        m[(k, q)] = mkp * sp + mkq * c;
                    }
                }
            }
        }
        if !rotated {
            return Ok(j_acc);
        }
    }

    let mut worst = T::zero();
    for p in 0..n {
        for q in p + 1..n {
            let g = (0..n).fold(zero, |acc, i| acc + z[(i, p)].conj() * z[(i, q)]).norm();
            let d = (col_norm_sqr(z, p, 0) * col_norm_sqr(z, q, 0)).sqrt();
            if d > T::zero() {
                worst = worst.max(g / d);
            }
        }
    }
    Err(Error::NonConvergence { sweeps: MAX_SWEEPS, off: worst.to_f() })
}

/// Singular values (descending) and left singular vectors of `y`.
pub fn left_svd<T: Real>(y: &ComplexMatrix<T>) -> Result<LeftSvd<T>> {
    let n = y.dim();
    let row_norms: Vec<T> = (0..n).map(|i| (0..n).fold(T::zero(), |acc, j| acc + y[(i, j)].norm_sqr())).collect();
    let mut rows: Vec<usize> = (0..n).collect();
    rows.sort_by(|&a, &b| row_norms[b].partial_cmp(&row_norms[a]).expect("finite"));
    let mut sorted = ComplexMatrix::zeros(n);
    for (new, &old) in rows.iter().enumerate() {
        for j in 0..n {
            sorted[(new, j)] = y[(old, j)];
        }
    }

    let (q, r) = pivoted_qr(&sorted);
    let mut z = r.adjoint();
    let j_acc = hestenes(&mut z)?;
    let sigma: Vec<T> = (0..n).map(|j| col_norm(&z, j)).collect();
    let qj = &q * &j_acc;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).expect("finite"));
    let mut left = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for (sorted_row, &orig_row) in rows.iter().enumerate() {
            left[(orig_row, new_col)] = qj[(sorted_row, old_col)];
        }
    }
    Ok(LeftSvd { values: order.iter().map(|&k| sigma[k]).collect(), left })
}
