use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Real scalar backing every matrix in the crate.
///
/// Implemented for `f64` (the reference precision, whose tolerances are the
/// documented defaults) and `f32`, whose tolerances are widened to what single
/// precision can actually resolve.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Relative Hermitian defect accepted on validation.
    const HERM_TOL: f64;
    /// Relative negativity accepted (and clamped) on PSD validation.
    const PSD_TOL: f64;
    /// Relative off-diagonal mass at which the Jacobi eigensolver has converged.
    const EIG_OFF_TOL: f64;
    /// Relative reconstruction error accepted for a PSD spectral decomposition.
    const RECON_TOL: f64;
    /// Relative slack applied to inequalities that hold exactly in theory.
    const INEQ_TOL: f64;
    /// Margins inside this band are numerical noise, not evidence.
    const NOISE_BAND: f64;

    /// Lossless for `f64`, rounds for `f32`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every Real")
    }

    fn to_f(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f64 {
    const HERM_TOL: f64 = 1e-12;
    const PSD_TOL: f64 = 1e-10;
    const EIG_OFF_TOL: f64 = 1e-14;
    const RECON_TOL: f64 = 1e-11;
    const INEQ_TOL: f64 = 1e-9;
    const NOISE_BAND: f64 = 1e-8;
}

impl Real for f32 {
    const HERM_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-5;
    const EIG_OFF_TOL: f64 = 1e-6;
    const RECON_TOL: f64 = 1e-5;
    const INEQ_TOL: f64 = 1e-4;
    const NOISE_BAND: f64 = 1e-3;
}
