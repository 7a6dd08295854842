//! Seeded randomized scan of triangle-inequality margins of `d_p` over a grid of p.
//!
//! The scan is empirical. Below p = 1 it can exhibit violations (the built-in
//! 2×2 triple fails at p = 1/2). For 1 < p < 2 whether `d_p` is a metric is an
//! open question. An empty violation list there only means that no violation
//! turned up in the trials run. It is not evidence of metricity.
//!
//! Trial `t` draws its matrices from the ChaCha8 stream keyed by `(seed, t)`,
//! so results do not depend on how trials are spread over threads.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::random::{gaussian_matrix, random_diagonal_psd, random_psd_with, stream_rng};
use crate::matcore::{ComplexMatrix, PsdMatrix};
use crate::means::validate_p;
use crate::scalar::Real;
use crate::verify::{check_triangle, paper_triple};

/// Stream offset for the perturbation draws of a trial.
const PERTURB_STREAM: u64 = 1 << 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    /// Three independent complex Wishart matrices `scale·G*G/dim`.
    Wishart,
    /// Three independent diagonal matrices, so the triple commutes.
    CommutingDiagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SearchConfig<T> {
    pub p_grid: Vec<T>,
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub scale: T,
    pub include_paper_triple: bool,
    pub perturbation_radius: T,
    pub sampler: Sampler,
    /// Margins with `|margin| ≤ noise_band` are inconclusive rather than violations.
    pub noise_band: T,
}

impl<T: Real> SearchConfig<T> {
    pub fn new(p_grid: Vec<T>, dim: usize, trials: u64, seed: u64) -> Self {
        Self {
            p_grid,
            dim,
            trials,
            seed,
            scale: T::one(),
            include_paper_triple: false,
            perturbation_radius: T::zero(),
            sampler: Sampler::Wishart,
            noise_band: T::of(T::NOISE_BAND),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.p_grid.is_empty() {
            return bad("p grid is empty".into());
        }
        for &p in &self.p_grid {
            validate_p(p).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        }
        if self.dim < 2 {
            return bad(format!("dim must be at least 2, got {}", self.dim));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.trials >= PERTURB_STREAM {
            return bad(format!("trials must be below 2^63, got {}", self.trials));
        }
        if !(self.scale > T::zero() && self.scale.is_finite()) {
            return bad(format!("scale must be positive and finite, got {}", self.scale));
        }
        if !(self.perturbation_radius >= T::zero() && self.perturbation_radius.is_finite()) {
            return bad(format!(
                "perturbation radius must be finite and nonnegative, got {}",
                self.perturbation_radius
            ));
        }
        if !(self.noise_band >= T::zero() && self.noise_band.is_finite()) {
            return bad(format!("noise band must be finite and nonnegative, got {}", self.noise_band));
        }
        let needs_builtin = self.include_paper_triple || self.perturbation_radius > T::zero();
        if needs_builtin && self.dim != 2 {
            return bad(format!("the built-in triple is 2x2 but dim = {}", self.dim));
        }
        Ok(())
    }

    fn perturbing(&self) -> bool {
        self.perturbation_radius > T::zero()
    }
}

/// Where a triple came from; enough to regenerate it bit for bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Random { seed: u64, trial: u64 },
    PaperTriple,
    PerturbedPaperTriple { seed: u64, trial: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ViolationReport<T> {
    pub p: T,
    pub a: ComplexMatrix<T>,
    pub b: ComplexMatrix<T>,
    pub c: ComplexMatrix<T>,
    pub margin: T,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct PSummary<T> {
    pub p: T,
    /// Triples evaluated at this p.
    pub trials: u64,
    pub violations: u64,
    pub inconclusive: u64,
    /// Smallest margin seen; `+∞` when nothing was evaluated.
    pub min_margin: T,
    pub errors: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialError {
    pub trial: u64,
    pub provenance: Provenance,
    pub p: Option<f64>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ScanResult<T> {
    pub summary: Vec<PSummary<T>>,
    pub violations: Vec<ViolationReport<T>>,
    pub skipped: Vec<TrialError>,
}

pub type Triple<T> = (PsdMatrix<T>, PsdMatrix<T>, PsdMatrix<T>);

/// Rebuilds the triple named by `provenance` under `config`.
pub fn regenerate_triple<T: Real>(config: &SearchConfig<T>, provenance: Provenance) -> Result<Triple<T>> {
    match provenance {
        Provenance::PaperTriple => Ok(paper_triple()),
        Provenance::Random { seed, trial } => {
            let mut rng = stream_rng(seed, trial);
            let draw = |rng: &mut _| match config.sampler {
                Sampler::Wishart => random_psd_with(config.dim, config.scale, rng),
                Sampler::CommutingDiagonal => random_diagonal_psd(config.dim, config.scale, rng),
            };
            Ok((draw(&mut rng)?, draw(&mut rng)?, draw(&mut rng)?))
        }
        Provenance::PerturbedPaperTriple { seed, trial } => {
            let mut rng = stream_rng(seed, trial | PERTURB_STREAM);
            let (a, b, c) = paper_triple::<T>();
            let mut bump = |m: &PsdMatrix<T>| -> Result<PsdMatrix<T>> {
                let g: ComplexMatrix<T> = gaussian_matrix(2, &mut rng);
                let h = g.hermitian_part();
                let norm = h.frobenius();
                let u: f64 = rand::Rng::gen(&mut rng);
                let size = config.perturbation_radius * T::of(u);
                let h = if norm > T::zero() { h.scale(size / norm) } else { h };
                PsdMatrix::from_matrix(m.matrix() + &h)
            };
            Ok((bump(&a)?, bump(&b)?, bump(&c)?))
        }
    }
}

enum Outcome<T> {
    Margin { p_index: usize, provenance: Provenance, margin: T, triple: usize },
    Failed(TrialError),
}

struct TrialRecord<T> {
    triples: Vec<Triple<T>>,
    outcomes: Vec<Outcome<T>>,
}

fn run_trial<T: Real>(config: &SearchConfig<T>, trial: u64) -> TrialRecord<T> {
    let mut sources = Vec::with_capacity(2);
    if config.include_paper_triple && trial == 0 {
        sources.push(Provenance::PaperTriple);
    } else {
        sources.push(Provenance::Random { seed: config.seed, trial });
        if config.perturbing() {
            sources.push(Provenance::PerturbedPaperTriple { seed: config.seed, trial });
        }
    }

    let mut record = TrialRecord { triples: Vec::new(), outcomes: Vec::new() };
    for provenance in sources {
        let triple = match regenerate_triple(config, provenance) {
            Ok(t) => t,
            Err(e) => {
                record.outcomes.push(Outcome::Failed(TrialError {
                    trial,
                    provenance,
                    p: None,
                    message: e.to_string(),
                }));
                continue;
            }
        };
        let index = record.triples.len();
        for (p_index, &p) in config.p_grid.iter().enumerate() {
            match check_triangle(&triple.0, &triple.1, &triple.2, p) {
                Ok(margin) => record.outcomes.push(Outcome::Margin { p_index, provenance, margin, triple: index }),
                Err(e) => record.outcomes.push(Outcome::Failed(TrialError {
                    trial,
                    provenance,
                    p: Some(p.to_f()),
                    message: e.to_string(),
                })),
            }
        }
        record.triples.push(triple);
    }
    record
}

/// Runs every trial of `config` on up to `threads` workers (0 = all cores).
pub fn scan<T: Real>(config: &SearchConfig<T>, threads: usize) -> Result<ScanResult<T>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start thread pool: {e}")))?;
    let records: Vec<TrialRecord<T>> =
        pool.install(|| (0..config.trials).into_par_iter().map(|t| run_trial(config, t)).collect());

    let mut summary: Vec<PSummary<T>> = config
        .p_grid
        .iter()
        .map(|&p| PSummary { p, trials: 0, violations: 0, inconclusive: 0, min_margin: T::infinity(), errors: 0 })
        .collect();
    let mut violations = Vec::new();
    let mut skipped = Vec::new();

    for record in records {
        for outcome in record.outcomes {
            match outcome {
                Outcome::Margin { p_index, provenance, margin, triple } => {
                    let s = &mut summary[p_index];
                    s.trials += 1;
                    s.min_margin = s.min_margin.min(margin);
                    if margin.abs() <= config.noise_band {
                        s.inconclusive += 1;
                    } else if margin < T::zero() {
                        s.violations += 1;
                        let (a, b, c) = &record.triples[triple];
                        violations.push(ViolationReport {
                            p: s.p,
                            a: a.matrix().clone(),
                            b: b.matrix().clone(),
                            c: c.matrix().clone(),
                            margin,
                            provenance,
                        });
                    }
                }
                Outcome::Failed(err) => {
                    if let Some(p) = err.p {
                        if let Some(s) = summary.iter_mut().find(|s| s.p.to_f() == p) {
                            s.errors += 1;
                        }
                    }
                    skipped.push(err);
                }
            }
        }
    }
    Ok(ScanResult { summary, violations, skipped })
}

/// `count` evenly spaced values from `min` to `max` inclusive.
pub fn linear_grid<T: Real>(min: T, max: T, count: usize) -> Result<Vec<T>> {
    if count == 0 {
        return Err(Error::InvalidConfig("p grid needs at least one step".into()));
    }
    if !(min <= max) {
        return Err(Error::InvalidConfig(format!("p-min {min} exceeds p-max {max}")));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let step = (max - min) / T::of((count - 1) as f64);
    Ok((0..count).map(|i| if i + 1 == count { max } else { min + step * T::of(i as f64) }).collect())
}

#[derive(Serialize)]
struct CsvRow {
    p: f64,
    trials: u64,
    violations: u64,
    min_margin: f64,
}

/// Summary as CSV with header `p,trials,violations,min_margin`.
pub fn write_summary_csv<T: Real, W: Write>(summary: &[PSummary<T>], out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for s in summary {
        writer.serialize(CsvRow {
            p: s.p.to_f(),
            trials: s.trials,
            violations: s.violations,
            min_margin: s.min_margin.to_f(),
        })?;
    }
    writer.flush()
}

/// One JSON object per violation, newline terminated.
pub fn write_violations_jsonl<T: Real, W: Write>(violations: &[ViolationReport<T>], mut out: W) -> std::io::Result<()> {
    for v in violations {
        serde_json::to_writer(&mut out, v)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// A violation line read back from JSON.
#[derive(Clone, Debug, Deserialize)]
#[serde(bound = "T: Real")]
pub struct StoredViolation<T> {
    pub p: T,
    pub a: ComplexMatrix<T>,
    pub b: ComplexMatrix<T>,
    pub c: ComplexMatrix<T>,
    pub margin: T,
    pub provenance: Provenance,
}

impl<T: Real> StoredViolation<T> {
    /// Recomputes the margin from the stored matrices.
    pub fn recheck(&self) -> Result<T> {
        let a = PsdMatrix::from_matrix(self.a.clone())?;
        let b = PsdMatrix::from_matrix(self.b.clone())?;
        let c = PsdMatrix::from_matrix(self.c.clone())?;
        check_triangle(&a, &b, &c, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_triple_only() {
        let mut cfg = SearchConfig::<f64>::new(vec![0.5], 2, 1, 0);
        cfg.include_paper_triple = true;
        let r = scan(&cfg, 1).unwrap();
        assert_eq!(r.violations.len(), 1);
        let v = &r.violations[0];
        assert_eq!(v.provenance, Provenance::PaperTriple);
        assert!((v.margin + 7.6023146e-5).abs() < 1e-9);
        assert_eq!(r.summary[0].violations, 1);
        assert_eq!(r.summary[0].trials, 1);
    }

    #[test]
    fn commuting_sampler_never_violates_at_p1() {
        let mut cfg = SearchConfig::new(vec![1.0], 3, 100, 17);
        cfg.sampler = Sampler::CommutingDiagonal;
        let r = scan(&cfg, 2).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.summary[0].trials, 100);
        assert!(r.summary[0].min_margin >= -1e-8);
    }

    #[test]
    fn invalid_configs() {
        let base = SearchConfig::<f64>::new(vec![0.5], 2, 1, 0);
        let mut c = base.clone();
        c.trials = 0;
        assert!(matches!(scan(&c, 1), Err(Error::InvalidConfig(_))));
        let mut c = base.clone();
        c.p_grid = vec![0.5, -1.0];
        assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))));
        let mut c = base.clone();
        c.dim = 3;
        c.include_paper_triple = true;
        assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))));
        let mut c = base;
        c.p_grid.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn grid() {
        assert_eq!(linear_grid(0.25, 1.75, 7).unwrap(), vec![0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75]);
        assert_eq!(linear_grid(0.5, 0.5, 1).unwrap(), vec![0.5]);
        assert!(linear_grid(2.0, 1.0, 3).is_err());
        assert!(linear_grid(1.0, 2.0, 0).is_err());
    }

    #[test]
    fn perturbed_triples_are_reproducible() {
        let mut cfg = SearchConfig::new(vec![0.5], 2, 4, 5);
        cfg.perturbation_radius = 1e-3;
        let prov = Provenance::PerturbedPaperTriple { seed: 5, trial: 2 };
        let (a1, _, _) = regenerate_triple(&cfg, prov).unwrap();
        let (a2, _, _) = regenerate_triple(&cfg, prov).unwrap();
        assert_eq!(a1.matrix(), a2.matrix());
        let (builtin_a, _, _) = paper_triple::<f64>();
        assert!((a1.matrix() - builtin_a.matrix()).frobenius() <= 1e-3);
        let r = scan(&cfg, 2).unwrap();
        assert_eq!(r.summary[0].trials + r.summary[0].errors, 8);
    }

    #[test]
    fn csv_and_jsonl_formats() {
        let mut cfg = SearchConfig::new(vec![0.5, 1.0], 2, 1, 0);
        cfg.include_paper_triple = true;
        let r = scan(&cfg, 1).unwrap();
        let mut csv_out = Vec::new();
        write_summary_csv(&r.summary, &mut csv_out).unwrap();
        let text = String::from_utf8(csv_out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("p,trials,violations,min_margin"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("0.5,1,1,"), "{row}");
        let margin: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(margin, r.summary[0].min_margin);
        assert!(lines.next().unwrap().starts_with("1.0,1,0,"));

        let mut jsonl = Vec::new();
        write_violations_jsonl(&r.violations, &mut jsonl).unwrap();
        let text = String::from_utf8(jsonl).unwrap();
        assert_eq!(text.lines().count(), 1);
        let stored: StoredViolation<f64> = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(stored.provenance, Provenance::PaperTriple);
        assert_eq!(stored.recheck().unwrap(), r.violations[0].margin);
    }
}
