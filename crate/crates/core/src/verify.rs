//! Executable forms of the trace and norm inequalities for the κ_p mean, and
//! the exact reproduction of the 2×2 triangle-inequality counterexample at
//! `p = 1/2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{matrix_power, sqrt2x2_closed, ComplexMatrix, PsdMatrix};
use crate::means::{arith_mean, d_p, kappa_mean, kappa_trace, validate_p};
use crate::norms::{norm, NormSpec};
use crate::scalar::Real;

/// One inequality chain `lhs ≤ mid ≤ rhs` (or `lhs ≤ rhs`) with signed margins.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct InequalityReport<T> {
    pub name: String,
    pub p: T,
    pub lhs: T,
    pub mid: Option<T>,
    pub rhs: T,
    /// `[mid − lhs, rhs − mid]` for a chain.
    pub margins: Vec<T>,
    pub passed: bool,
    pub tolerance: T,
}

impl<T: Real> InequalityReport<T> {
    fn chain(name: String, p: T, lhs: T, mid: T, rhs: T) -> Self {
        let tolerance = T::of(T::INEQ_TOL) * rhs.max(T::one());
        let margins = vec![mid - lhs, rhs - mid];
        let passed = margins.iter().all(|&m| m >= -tolerance);
        Self { name, p, lhs, mid: Some(mid), rhs, margins, passed, tolerance }
    }

    pub fn worst_margin(&self) -> T {
        self.margins.iter().copied().fold(T::infinity(), T::min)
    }
}

/// `Tr(A κ_p B) ≤ √(Tr A · Tr B) ≤ Tr(A∇B)`.
pub fn check_trace_inequality<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, p: T) -> Result<InequalityReport<T>> {
    let lhs = kappa_trace(a, b, p)?;
    let (ta, tb) = (a.trace(), b.trace());
    Ok(InequalityReport::chain("trace".into(), p, lhs, (ta * tb).sqrt(), (ta + tb) * T::of(0.5)))
}

/// `⦀A κ_p B⦀ ≤ ⦀A⦀^{1/2} ⦀B⦀^{1/2} ≤ (⦀A⦀ + ⦀B⦀)/2` for a genuine norm.
pub fn check_uinorm_inequality<T: Real>(
    a: &PsdMatrix<T>,
    b: &PsdMatrix<T>,
    p: T,
    spec: NormSpec<T>,
) -> Result<InequalityReport<T>> {
    if spec.is_quasi() {
        return Err(Error::InvalidNormSpec(format!("{spec} is only a quasi-norm")));
    }
    validate_p(p)?;
    spec.validate(a.dim())?;
    let k = kappa_mean(a, b, p)?;
    let lhs = norm(k.matrix(), spec)?;
    let na = norm(a.matrix(), spec)?;
    let nb = norm(b.matrix(), spec)?;
    Ok(InequalityReport::chain(spec.to_string(), p, lhs, (na * nb).sqrt(), (na + nb) * T::of(0.5)))
}

/// `d_p(A,C) + d_p(C,B) − d_p(A,B)`; negative values violate the triangle inequality.
pub fn check_triangle<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, c: &PsdMatrix<T>, p: T) -> Result<T> {
    let ab = d_p(a, b, p)?.d;
    let ac = d_p(a, c, p)?.d;
    let cb = d_p(c, b, p)?.d;
    Ok(ac + cb - ab)
}

/// The triple `A = diag(4,1)`, `B = [[5/2,3/2],[3/2,5/2]]`, `C = [[25/8,3/4],[3/4,13/8]]`.
///
/// Every entry is a dyadic rational, so the matrices are exact in binary floating point.
pub fn paper_triple<T: Real>() -> (PsdMatrix<T>, PsdMatrix<T>, PsdMatrix<T>) {
    let f = T::of;
    let a = PsdMatrix::from_diag(&[f(4.0), f(1.0)]);
    let b = PsdMatrix::from_real_rows(&[&[f(2.5), f(1.5)], &[f(1.5), f(2.5)]]);
    let c = PsdMatrix::from_real_rows(&[&[f(3.125), f(0.75)], &[f(0.75), f(1.625)]]);
    (a.expect("A is PD"), b.expect("B is PD"), c.expect("C is PD"))
}

/// The exchange `U = [[1,1],[1,-1]]/√2` with `B = U A Uᵀ` and `C = U C Uᵀ`.
pub fn paper_exchange<T: Real>() -> ComplexMatrix<T> {
    let h = T::FRAC_1_SQRT_2();
    ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]])
}

/// A computed quantity next to its closed-form value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reproduced {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub ok: bool,
}

impl Reproduced {
    fn new(name: &str, computed: f64, reference: f64, tolerance: f64) -> Self {
        let deviation = (computed - reference).abs();
        Self { name: name.into(), computed, reference, deviation, tolerance, ok: deviation <= tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub p: f64,
    pub a: ComplexMatrix<f64>,
    pub b: ComplexMatrix<f64>,
    pub c: ComplexMatrix<f64>,
    pub d2_ab: f64,
    pub d2_ac: f64,
    pub d2_bc: f64,
    /// `d(A,C) + d(C,B) − d(A,B)`.
    pub triangle_margin: f64,
    /// `d²(A,B) − 4·d²(A,C)`.
    pub gap: f64,
    /// `33² > 64·17`, the integer inequality behind the positivity of the gap.
    pub integer_certificate: bool,
    pub checks: Vec<Reproduced>,
    pub passed: bool,
}

impl CounterexampleReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.ok)
            .map(|c| {
                format!(
                    "{}: computed {:e}, expected {:e} (deviation {:e} > {:e})",
                    c.name, c.computed, c.reference, c.deviation, c.tolerance
                )
            })
            .collect();
        if !(self.triangle_margin < 0.0) {
            out.push(format!("triangle margin {:e} is not negative", self.triangle_margin));
        }
        if !(self.gap > 0.0) {
            out.push(format!("gap {:e} is not positive", self.gap));
        }
        if !self.integer_certificate {
            out.push("33^2 > 64*17 does not hold".into());
        }
        out
    }
}

/// Tolerance on the squared distances, traces and the gap identity.
pub const REPRO_TOL: f64 = 1e-10;
/// Tolerance on the matrix identities `C = M₀²`, `C = UCUᵀ`, `B = UAUᵀ`.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Tolerance on the triangle margin.
pub const MARGIN_TOL: f64 = 1e-9;

/// Recomputes every quantity of the counterexample and compares each with its
/// radical closed form. The report is returned whether or not it passes.
pub fn counterexample_report() -> Result<CounterexampleReport> {
    let p = 0.5;
    let (a, b, c) = paper_triple::<f64>();
    let (r2, r17, r34) = (2f64.sqrt(), 17f64.sqrt(), 34f64.sqrt());

    let ref_ab = 19.0 / 4.0 - 3.0 * r2;
    let ref_ac = 5.0 / 4.0 + r17 / 4.0 - 3.0 * r2 / 4.0 - 3.0 * r34 / 16.0;
    let ref_p2 = 0.25 + 3.0 * r2;
    let ref_q2 = 29.0 / 8.0 - r17 / 4.0 + 3.0 * r2 / 4.0 + 3.0 * r34 / 16.0;
    let ref_gap = 3.0 * r34 / 4.0 - r17 - 0.25;
    let ref_margin = 2.0 * ref_ac.sqrt() - ref_ab.sqrt();

    let ab = d_p(&a, &b, p)?;
    let ac = d_p(&a, &c, p)?;
    let bc = d_p(&b, &c, p)?;
    let cb = d_p(&c, &b, p)?;
    let triangle_margin = ac.d + cb.d - ab.d;
    let gap = ab.d_squared - 4.0 * ac.d_squared;

    let half = |m: &PsdMatrix<f64>| matrix_power(m, 0.5);
    let m0 = PsdMatrix::from_matrix((half(&a)?.matrix() + half(&b)?.matrix()).scale(0.5))?;
    let m0_sq = m0.matrix() * m0.matrix();
    let u = paper_exchange::<f64>();
    let ucu = &(&u * c.matrix()) * &u.adjoint();
    let uau = &(&u * a.matrix()) * &u.adjoint();
    let c_quarter_closed = sqrt2x2_closed(&m0)?;
    let c_quarter = matrix_power(&c, 0.25)?;
    let det_c = {
        let m = c.matrix();
        (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
    };
    let m0m = m0.matrix();
    let det_m0 = (m0m[(0, 0)] * m0m[(1, 1)] - m0m[(0, 1)] * m0m[(1, 0)]).re;

    let checks = vec![
        Reproduced::new("d2(A,B) = 19/4 - 3*sqrt2", ab.d_squared, ref_ab, REPRO_TOL),
        Reproduced::new("d2(A,C) = 5/4 + sqrt17/4 - 3*sqrt2/4 - 3*sqrt34/16", ac.d_squared, ref_ac, REPRO_TOL),
        Reproduced::new("d2(B,C) = d2(A,C)", bc.d_squared, ac.d_squared, REPRO_TOL),
        Reproduced::new("d(B,C) = d(A,C)", bc.d, ac.d, REPRO_TOL),
        Reproduced::new("d(C,B) = d(B,C)", cb.d, bc.d, REPRO_TOL),
        Reproduced::new("Tr(P^2) = 1/4 + 3*sqrt2", ab.trace_kappa, ref_p2, REPRO_TOL),
        Reproduced::new("Tr(Q^2) = 29/8 - sqrt17/4 + 3*sqrt2/4 + 3*sqrt34/16", ac.trace_kappa, ref_q2, REPRO_TOL),
        Reproduced::new("Tr((A+B)/2) = 5", arith_mean(&a, &b)?.trace(), 5.0, REPRO_TOL),
        Reproduced::new("Tr((A+C)/2) = 39/8", arith_mean(&a, &c)?.trace(), 39.0 / 8.0, REPRO_TOL),
        Reproduced::new("det C = 289/64", det_c, 289.0 / 64.0, REPRO_TOL),
        Reproduced::new("Tr M0 = 3", m0.trace(), 3.0, REPRO_TOL),
        Reproduced::new("det M0 = 17/8", det_m0, 17.0 / 8.0, REPRO_TOL),
        Reproduced::new("d2(A,B) - 4 d2(A,C) = 3*sqrt34/4 - sqrt17 - 1/4", gap, ref_gap, REPRO_TOL),
        Reproduced::new("triangle margin = 2 d(A,C) - d(A,B)", triangle_margin, ref_margin, MARGIN_TOL),
        Reproduced::new("||M0^2 - C||_F", (&m0_sq - c.matrix()).frobenius(), 0.0, STRUCTURE_TOL),
        Reproduced::new("||U C U^T - C||_F", (&ucu - c.matrix()).frobenius(), 0.0, STRUCTURE_TOL),
        Reproduced::new("||U A U^T - B||_F", (&uau - b.matrix()).frobenius(), 0.0, STRUCTURE_TOL),
        Reproduced::new(
            "||sqrt2x2(M0) - C^(1/4)||_F",
            (c_quarter_closed.matrix() - c_quarter.matrix()).frobenius(),
            0.0,
            1e-11,
        ),
    ];

    let mut report = CounterexampleReport {
        p,
        a: a.matrix().clone(),
        b: b.matrix().clone(),
        c: c.matrix().clone(),
        d2_ab: ab.d_squared,
        d2_ac: ac.d_squared,
        d2_bc: bc.d_squared,
        triangle_margin,
        gap,
        integer_certificate: 33u64 * 33 > 64 * 17,
        checks,
        passed: false,
    };
    report.passed = report.failures().is_empty();
    Ok(report)
}

/// Like [`counterexample_report`], but any deviation is an error.
pub fn reproduce_counterexample() -> Result<CounterexampleReport> {
    let report = counterexample_report()?;
    let failures = report.failures();
    if failures.is_empty() {
        Ok(report)
    } else {
        Err(Error::ReproductionFailure(failures))
    }
}
