//! Kappa_p operator means of positive semidefinite matrices, the `d_p` trace
//! distances they induce, and executable checks of the inequalities around them.
//!
//! All numerical code is generic over [`Real`] (`f64` or `f32`); the aliases
//! below fix the common double-precision instantiations.
//!
//! - [`matcore`]: dense complex matrices, Jacobi eigensolver, functional calculus.
//! - [`norms`]: Schatten, Ky Fan, operator and trace norms; Hölder check.
//! - [`means`]: `A κ_p B`, `A∇B`, `d_p`, Hellinger and Bures distances.
//! - [`verify`]: trace and norm inequality chains; the 2×2 counterexample at p = 1/2.
//! - [`search`]: seeded scans for triangle-inequality violations.

// `!(x > 0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod matcore;
pub mod means;
pub mod norms;
pub mod scalar;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use matcore::{
    hermitian_eig, matrix_power, polar_factors, random_psd, singular_values, sqrt2x2_closed, ComplexMatrix,
    HermitianMatrix, PsdMatrix, SpectralDecomposition,
};
pub use means::{arith_mean, bures, d_p, hellinger, kappa_mean, DistanceReport};
pub use norms::{holder_check, norm, HolderMargin, NormSpec};
pub use scalar::Real;
pub use search::{scan, Provenance, SearchConfig, ViolationReport};
pub use verify::{
    check_trace_inequality, check_triangle, check_uinorm_inequality, reproduce_counterexample, CounterexampleReport,
    InequalityReport,
};

pub type Matrix64 = ComplexMatrix<f64>;
pub type Psd64 = PsdMatrix<f64>;
pub type NormSpec64 = NormSpec<f64>;
pub type Matrix32 = ComplexMatrix<f32>;
pub type Psd32 = PsdMatrix<f32>;
pub type NormSpec32 = NormSpec<f32>;
