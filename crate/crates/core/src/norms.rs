//! Unitarily invariant norms and the Hölder inequality for them.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matcore::{matrix_power, polar_factors, singular_values, ComplexMatrix};
use crate::scalar::Real;

/// A unitarily invariant norm, evaluated through singular values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec<T> {
    /// `(Σ σᵢˢ)^{1/s}`; a quasi-norm for `0 < s < 1`, the operator norm for `s = ∞`.
    Schatten(T),
    /// Sum of the `k` largest singular values.
    KyFan(usize),
    Operator,
    Trace,
}

impl<T: Real> NormSpec<T> {
    /// True for Schatten exponents below one, where the triangle inequality fails.
    pub fn is_quasi(&self) -> bool {
        matches!(*self, NormSpec::Schatten(s) if s < T::one())
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            NormSpec::Schatten(s) if !(s > T::zero()) => {
                Err(Error::InvalidNormSpec(format!("schatten exponent {s} must be positive")))
            }
            NormSpec::KyFan(k) if k == 0 || k > dim => {
                Err(Error::InvalidNormSpec(format!("kyfan index {k} out of range 1..={dim}")))
            }
            _ => Ok(()),
        }
    }

    /// The Ky Fan family `k = 1..dim` together with Schatten `s ∈ {1, 1.5, 2, 3}`
    /// and the operator norm: the finite stand-in for "every unitarily invariant norm".
    pub fn test_family(dim: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (1..=dim).map(NormSpec::KyFan).collect();
        out.extend([1.0, 1.5, 2.0, 3.0].iter().map(|&s| NormSpec::Schatten(T::of(s))));
        out.push(NormSpec::Operator);
        out.push(NormSpec::Trace);
        out
    }
}

impl<T: Real> fmt::Display for NormSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Schatten(s) => write!(f, "schatten:{s}"),
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            NormSpec::Operator => f.write_str("operator"),
            NormSpec::Trace => f.write_str("trace"),
        }
    }
}

impl<T: Real> FromStr for NormSpec<T> {
    type Err = Error;

    /// Parses `trace`, `operator`, `kyfan:k`, or `schatten:s`.
    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidNormSpec(format!("cannot parse norm {s:?}; expected trace|operator|kyfan:k|schatten:s"));
        match s.split_once(':') {
            None => match s {
                "trace" => Ok(NormSpec::Trace),
                "operator" => Ok(NormSpec::Operator),
                _ => Err(bad()),
            },
            Some(("kyfan", k)) => Ok(NormSpec::KyFan(k.parse().map_err(|_| bad())?)),
            Some(("schatten", v)) => {
                let v: f64 = v.parse().map_err(|_| bad())?;
                if !(v > 0.0) {
                    return Err(Error::InvalidNormSpec(format!("schatten exponent {v} must be positive")));
                }
                Ok(NormSpec::Schatten(T::of(v)))
            }
            _ => Err(bad()),
        }
    }
}

impl<T: Real> Serialize for NormSpec<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Applies `spec` to singular values sorted descending.
pub fn norm_of_singular_values<T: Real>(sigma: &[T], spec: NormSpec<T>) -> Result<T> {
    spec.validate(sigma.len())?;
    let top = sigma.first().copied().unwrap_or_else(T::zero);
    Ok(match spec {
        NormSpec::Operator => top,
        NormSpec::Trace => sigma.iter().fold(T::zero(), |a, &s| a + s),
        NormSpec::KyFan(k) => sigma[..k].iter().fold(T::zero(), |a, &s| a + s),
        NormSpec::Schatten(s) if s.is_infinite() => top,
        NormSpec::Schatten(s) => {
            if top == T::zero() {
                return Ok(T::zero());
            }
            let sum = sigma.iter().fold(T::zero(), |a, &x| a + (x / top).powf(s));
            top * sum.powf(T::one() / s)
        }
    })
}

pub fn norm<T: Real>(x: &ComplexMatrix<T>, spec: NormSpec<T>) -> Result<T> {
    spec.validate(x.dim())?;
    norm_of_singular_values(&singular_values(x)?, spec)
}

/// Both sides of `⦀|AB|^γ⦀^{1/γ} ≤ ⦀|A|^α⦀^{1/α} · ⦀|B|^β⦀^{1/β}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct HolderMargin<T> {
    pub lhs: T,
    pub rhs: T,
    /// `rhs − lhs`; negative would mean the implementation is wrong.
    pub margin: T,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub norm: NormSpec<T>,
}

/// `⦀|X|^e⦀^{1/e}` through the polar factor of `X`.
fn abs_power_norm<T: Real>(x: &ComplexMatrix<T>, e: T, spec: NormSpec<T>) -> Result<T> {
    let (_, abs) = polar_factors(x)?;
    let powered = matrix_power(&abs, e)?;
    Ok(norm(powered.matrix(), spec)?.powf(T::one() / e))
}

pub fn holder_check<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    alpha: T,
    beta: T,
    gamma: T,
    spec: NormSpec<T>,
) -> Result<HolderMargin<T>> {
    let positive = |x: T| x > T::zero() && x.is_finite();
    let mismatch = (T::one() / alpha + T::one() / beta - T::one() / gamma).abs();
    if !(positive(alpha) && positive(beta) && positive(gamma))
        || !(mismatch <= T::of(1e-12).max(T::epsilon() * T::of(8.0)))
    {
        return Err(Error::ExponentMismatch { alpha: alpha.to_f(), beta: beta.to_f(), gamma: gamma.to_f() });
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    spec.validate(a.dim())?;
    let lhs = abs_power_norm(&(a * b), gamma, spec)?;
    let rhs = abs_power_norm(a, alpha, spec)? * abs_power_norm(b, beta, spec)?;
    Ok(HolderMargin { lhs, rhs, margin: rhs - lhs, alpha, beta, gamma, norm: spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::random::{gaussian_matrix, random_psd_with, random_unitary, stream_rng};
    use crate::matcore::PsdMatrix;

    #[test]
    fn simple_values() {
        let i3 = ComplexMatrix::<f64>::identity(3);
        assert!((norm(&i3, NormSpec::Schatten(2.0)).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        let d = ComplexMatrix::from_diag(&[4.0, 1.0]);
        assert_eq!(norm(&d, NormSpec::KyFan(1)).unwrap(), 4.0);
        assert_eq!(norm(&d, NormSpec::KyFan(2)).unwrap(), 5.0);
        assert_eq!(norm(&d, NormSpec::Operator).unwrap(), 4.0);
        assert_eq!(norm(&d, NormSpec::Trace).unwrap(), 5.0);
        assert_eq!(norm(&d, NormSpec::Schatten(f64::INFINITY)).unwrap(), 4.0);
        assert_eq!(norm(&ComplexMatrix::<f64>::zeros(2), NormSpec::Schatten(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn invalid_specs() {
        let d = ComplexMatrix::<f64>::identity(2);
        assert!(matches!(norm(&d, NormSpec::KyFan(3)), Err(Error::InvalidNormSpec(_))));
        assert!(matches!(norm(&d, NormSpec::KyFan(0)), Err(Error::InvalidNormSpec(_))));
        assert!(matches!(norm(&d, NormSpec::Schatten(0.0)), Err(Error::InvalidNormSpec(_))));
        assert!(matches!(norm(&d, NormSpec::Schatten(-1.0)), Err(Error::InvalidNormSpec(_))));
        assert!(NormSpec::Schatten(0.5f64).is_quasi());
        assert!(!NormSpec::<f64>::Trace.is_quasi());
    }

    #[test]
    fn parse_and_display() {
        for text in ["trace", "operator", "kyfan:3", "schatten:1.5"] {
            let spec: NormSpec<f64> = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("kyfan:x".parse::<NormSpec<f64>>().is_err());
        assert!("schatten:0".parse::<NormSpec<f64>>().is_err());
        assert!("frobenius".parse::<NormSpec<f64>>().is_err());
    }

    #[test]
    fn family_identities() {
        for seed in 0..30 {
            let mut rng = stream_rng(seed, 11);
            let n = 2 + seed as usize % 5;
            let x: ComplexMatrix<f64> = gaussian_matrix(n, &mut rng);
            let trace = norm(&x, NormSpec::Trace).unwrap();
            let op = norm(&x, NormSpec::Operator).unwrap();
            assert!((norm(&x, NormSpec::KyFan(n)).unwrap() - trace).abs() <= 1e-12 * trace);
            assert!((norm(&x, NormSpec::KyFan(1)).unwrap() - op).abs() <= 1e-12 * op);
            assert!((norm(&x, NormSpec::Schatten(1.0)).unwrap() - trace).abs() <= 1e-12 * trace);
        }
    }

    #[test]
    fn trace_norm_of_psd_is_trace() {
        for seed in 0..30 {
            let mut rng = stream_rng(seed, 12);
            let p: PsdMatrix<f64> = random_psd_with(2 + seed as usize % 5, 1.0, &mut rng).unwrap();
            let t = p.trace();
            assert!((norm(p.matrix(), NormSpec::Trace).unwrap() - t).abs() <= 1e-12 * t);
        }
    }

    #[test]
    fn unitary_invariance() {
        for seed in 0..30 {
            let mut rng = stream_rng(seed, 13);
            let n = 2 + seed as usize % 5;
            let x: ComplexMatrix<f64> = gaussian_matrix(n, &mut rng);
            let u: ComplexMatrix<f64> = random_unitary(n, &mut rng);
            let v: ComplexMatrix<f64> = random_unitary(n, &mut rng);
            let uxv = &(&u * &x) * &v;
            for spec in NormSpec::test_family(n).into_iter().chain([NormSpec::Schatten(0.5)]) {
                let a = norm(&x, spec).unwrap();
                let b = norm(&uxv, spec).unwrap();
                assert!((a - b).abs() <= 1e-9 * a, "{spec}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn holder_identity_saturates() {
        let i = ComplexMatrix::<f64>::identity(2);
        let h = holder_check(&i, &i, 4.0, 4.0, 2.0, NormSpec::Trace).unwrap();
        assert!((h.lhs - 2f64.sqrt()).abs() < 1e-15);
        assert!((h.rhs - 2f64.sqrt()).abs() < 1e-15);
        assert!(h.margin.abs() < 1e-15);
    }

    #[test]
    fn holder_rejects_bad_exponents() {
        let i = ComplexMatrix::<f64>::identity(2);
        assert!(matches!(holder_check(&i, &i, 4.0, 4.0, 3.0, NormSpec::Trace), Err(Error::ExponentMismatch { .. })));
        assert!(matches!(holder_check(&i, &i, -4.0, 4.0, 2.0, NormSpec::Trace), Err(Error::ExponentMismatch { .. })));
        let j = ComplexMatrix::<f64>::identity(3);
        assert!(matches!(holder_check(&i, &j, 4.0, 4.0, 2.0, NormSpec::Trace), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn holder_quasi_norm_still_computes() {
        let mut rng = stream_rng(1, 14);
        let a: ComplexMatrix<f64> = gaussian_matrix(3, &mut rng);
        let b: ComplexMatrix<f64> = gaussian_matrix(3, &mut rng);
        let h = holder_check(&a, &b, 4.0, 4.0, 2.0, NormSpec::Schatten(0.5)).unwrap();
        assert!(h.margin >= -1e-9 * h.rhs);
    }
}
