//! Deterministic random matrices.
//!
//! Every generator draws from ChaCha8 (`rand_chacha`), keyed by
//! `seed_from_u64(seed)` with the 64-bit stream id selected through
//! `set_stream`. Normal deviates come from `rand_distr::StandardNormal`.
//! A standard complex Gaussian is `(x + i·y)/√2` with `x, y` independent
//! standard normals, so `E|z|² = 1`. Identical arguments give bit-identical
//! output on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::psd::{HermitianMatrix, PsdMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Counter-style generator: independent streams for each `(seed, stream)` key.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let entries = (0..dim * dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(T::of(re * h), T::of(im * h))
        })
        .collect();
    ComplexMatrix::from_raw(dim, entries)
}

/// `scale · G*G / dim` for a standard complex Gaussian `G` drawn from `rng`.
pub fn random_psd_with<T: Real, R: Rng + ?Sized>(dim: usize, scale: T, rng: &mut R) -> Result<PsdMatrix<T>> {
    if dim == 0 {
        return Err(Error::InvalidDimension("dim must be at least 1".into()));
    }
    if !(scale > T::zero() && scale.is_finite()) {
        return Err(Error::InvalidConfig(format!("scale {scale} must be positive and finite")));
    }
    let g: ComplexMatrix<T> = gaussian_matrix(dim, rng);
    let w = (&g.adjoint() * &g).scale(scale / T::of(dim as f64));
    PsdMatrix::new(HermitianMatrix::symmetrized(&w))
}

/// Complex Wishart sample `scale · G*G / dim` on stream 0 of `seed`.
pub fn random_psd<T: Real>(dim: usize, seed: u64, scale: T) -> Result<PsdMatrix<T>> {
    random_psd_with(dim, scale, &mut stream_rng(seed, 0))
}

/// Diagonal PSD matrix with independent `scale·|z|²` entries.
pub fn random_diagonal_psd<T: Real, R: Rng + ?Sized>(dim: usize, scale: T, rng: &mut R) -> Result<PsdMatrix<T>> {
    let diag: Vec<T> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            scale * T::of(0.5 * (re * re + im * im))
        })
        .collect();
    PsdMatrix::from_diag(&diag)
}

/// `(G + G*)/2` on stream 0 of `seed`.
pub fn random_hermitian<T: Real>(dim: usize, seed: u64) -> ComplexMatrix<T> {
    let g: ComplexMatrix<T> = gaussian_matrix(dim, &mut stream_rng(seed, 0));
    g.hermitian_part()
}

/// Haar-like unitary: Gram–Schmidt (two passes) on the columns of a Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    loop {
        let g: ComplexMatrix<T> = gaussian_matrix(dim, rng);
        if let Some(q) = orthonormalize(&g) {
            return q;
        }
    }
}

fn orthonormalize<T: Real>(g: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let n = g.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let mut q = g.clone();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let dot = (0..n).fold(zero, |acc, i| acc + q[(i, k)].conj() * q[(i, j)]);
                for i in 0..n {
                    q[(i, j)] = q[(i, j)] - q[(i, k)] * dot;
                }
            }
        }
        let norm = (0..n).fold(T::zero(), |acc, i| acc + q[(i, j)].norm_sqr()).sqrt();
        if norm <= T::epsilon() {
            return None;
        }
        for i in 0..n {
            q[(i, j)] = q[(i, j)] / norm;
        }
    }
    Some(q)
}
