//! Dense complex matrices, Hermitian eigendecomposition, and functional calculus.

pub mod eig;
pub mod funcalc;
pub mod matrix;
pub mod psd;
pub mod random;
pub mod svd;

pub use eig::hermitian_eig;
pub use funcalc::{gram, matrix_power, polar_factors, singular_values, sqrt2x2_closed};
pub use matrix::ComplexMatrix;
pub use psd::{HermitianMatrix, PsdMatrix, SpectralDecomposition};
pub use random::{random_psd, random_psd_with, random_unitary, stream_rng};
