use thiserror::Error;

/// Every failure the library can report.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type so the
/// messages read the same in either precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: ||M - M*||_F = {defect:e} exceeds {bound:e}")]
    NotHermitian { defect: f64, bound: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} is below -{bound:e}")]
    NotPsd { eigenvalue: f64, bound: f64 },
    #[error("spectral reconstruction error {error:e} exceeds {bound:e}")]
    Reconstruction { error: f64, bound: f64 },
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NonConvergence { sweeps: usize, off: f64 },
    #[error("negative power {exponent} of a singular matrix")]
    SingularPower { exponent: f64 },
    #[error("result out of floating-point range: {0}")]
    OutOfRange(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid norm: {0}")]
    InvalidNormSpec(String),
    #[error("exponents violate 1/alpha + 1/beta = 1/gamma: ({alpha}, {beta}, {gamma})")]
    ExponentMismatch { alpha: f64, beta: f64, gamma: f64 },
    #[error("trace gap {gap:e} is negative beyond tolerance {bound:e}")]
    NegativeGap { gap: f64, bound: f64 },
    #[error("counterexample reproduction failed: {}", .0.join("; "))]
    ReproductionFailure(Vec<String>),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed matrix: {0}")]
    Format(String),
}

impl Error {
    /// Errors caused by bad inputs rather than by numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidDimension(_)
                | Error::DimensionMismatch { .. }
                | Error::NonFinite { .. }
                | Error::NotHermitian { .. }
                | Error::NotPsd { .. }
                | Error::NotPositiveDefinite(_)
                | Error::InvalidExponent(_)
                | Error::InvalidNormSpec(_)
                | Error::ExponentMismatch { .. }
                | Error::InvalidConfig(_)
                | Error::Format(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
