//! `kappa`: command-line front end for κ_p distances, inequality suites, the
//! 2×2 counterexample and triangle-inequality scans.
//!
//! JSON goes to stdout, diagnostics to stderr. Every run first prints its full
//! invocation (defaults included) to stderr so it can be replayed exactly.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 numerical failure.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kappa_core::matcore::random::{random_psd_with, stream_rng};
use kappa_core::means::{validate_p, MAX_P};
use kappa_core::search::{linear_grid, write_summary_csv, write_violations_jsonl, Sampler};
use kappa_core::verify::{counterexample_report, paper_triple};
use kappa_core::{
    check_trace_inequality, check_uinorm_inequality, d_p, scan, ComplexMatrix, Error, InequalityReport, NormSpec64,
    Psd64, SearchConfig,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "kappa", version, about = "κ_p means, d_p distances and their inequalities")]
struct Cli {
    /// Print human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two PSD matrices read from JSON files.
    #[command(allow_negative_numbers = true)]
    Dist(DistArgs),
    /// Randomized trace and norm inequality suites.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Reproduce the 2×2 triangle-inequality counterexample at p = 1/2.
    Counterexample,
    /// Seeded scan for triangle-inequality violations over a grid of p.
    #[command(allow_negative_numbers = true)]
    Search(SearchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// `d_p` at the given `--p`.
    Dp,
    /// `√2·d_1`.
    Hellinger,
    /// `√2·d_2`.
    Bures,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Dp => "dp",
            Kind::Hellinger => "hellinger",
            Kind::Bures => "bures",
        }
    }
}

#[derive(clap::Args)]
struct DistArgs {
    /// Exponent p; required for `--kind dp`, fixed to 1 (hellinger) or 2 (bures) otherwise.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value = "dp")]
    kind: Kind,
    /// Matrix JSON file for A.
    a: PathBuf,
    /// Matrix JSON file for B.
    b: PathBuf,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// A single exponent.
    #[arg(long, conflicts_with = "p_grid", required_unless_present = "p_grid")]
    p: Option<f64>,
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// trace | operator | kyfan:k | schatten:s. Default: the whole test family.
    #[arg(long)]
    norm: Option<NormSpec64>,
    /// Use the built-in 2×2 pair A = diag(4,1), B = [[5/2,3/2],[3/2,5/2]] as trial 0.
    #[arg(long)]
    paper_pair: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Wishart,
    CommutingDiagonal,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0.25)]
    p_min: f64,
    #[arg(long, default_value_t = 2.0)]
    p_max: f64,
    #[arg(long, default_value_t = 8)]
    p_steps: usize,
    /// Comma-separated exponents; replaces `--p-min/--p-max/--p-steps`.
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    include_paper_triple: bool,
    /// Frobenius radius of perturbations around the built-in triple (0 = off).
    #[arg(long, default_value_t = 0.0)]
    perturb: f64,
    #[arg(long, value_enum, default_value = "wishart")]
    sampler: SamplerArg,
    /// Margins with absolute value at most this are inconclusive.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Worker threads (0 = all cores); results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Directory receiving `summary.csv` and `violations.jsonl`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a run stopped early; maps onto the exit code.
enum Failure {
    Invalid(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

type Run = Result<(Value, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    let outcome = match cli.command {
        Command::Dist(args) => dist(args, pretty),
        Command::Verify(args) => verify(args, pretty),
        Command::Counterexample => counterexample(pretty),
        Command::Search(args) => search(args, pretty),
    };
    match outcome {
        Ok((value, passed)) => {
            if !pretty {
                println!("{value}");
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn announce(line: &str) {
    eprintln!("# invocation: {line}");
}

fn flag(pretty: bool) -> &'static str {
    if pretty {
        " --pretty"
    } else {
        ""
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn read_psd(path: &Path) -> Result<Psd64, Failure> {
    let where_ = path.display();
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{where_}: {e}")))?;
    let matrix: ComplexMatrix<f64> =
        serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{where_}: {e}")))?;
    Psd64::from_matrix(matrix).map_err(|e| match Failure::from(e) {
        Failure::Invalid(m) => Failure::Invalid(format!("{where_}: {m}")),
        Failure::Numerical(m) => Failure::Numerical(format!("{where_}: {m}")),
    })
}

fn dist(args: DistArgs, pretty: bool) -> Run {
    let p = match (args.kind, args.p) {
        (Kind::Dp, Some(p)) => p,
        (Kind::Dp, None) => return Err(Failure::Invalid("--p is required for --kind dp".into())),
        (Kind::Hellinger, p) => fixed_p(p, 1.0, "hellinger")?,
        (Kind::Bures, p) => fixed_p(p, 2.0, "bures")?,
    };
    validate_p(p)?;
    announce(&format!(
        "kappa{} dist --p {p} --kind {} {} {}",
        flag(pretty),
        args.kind.name(),
        args.a.display(),
        args.b.display()
    ));
    let a = read_psd(&args.a)?;
    let b = read_psd(&args.b)?;
    let report = d_p(&a, &b, p)?;
    let distance = match args.kind {
        Kind::Dp => report.d,
        Kind::Hellinger | Kind::Bures => std::f64::consts::SQRT_2 * report.d,
    };
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["kind"] = json!(args.kind.name());
    value["distance"] = json!(distance);
    if pretty {
        println!("kind       {}", args.kind.name());
        println!("p          {p}");
        println!("distance   {distance:.15e}");
        println!("d_p        {:.15e}", report.d);
        println!("d_p^2      {:.15e}", report.d_squared);
        println!("Tr(A∇B)    {:.15e}", report.trace_arith);
        println!("Tr(AκB)    {:.15e}", report.trace_kappa);
    }
    Ok((value, true))
}

fn fixed_p(given: Option<f64>, p: f64, kind: &str) -> Result<f64, Failure> {
    match given {
        Some(q) if q != p => Err(Failure::Invalid(format!("--kind {kind} fixes p = {p}, got --p {q}"))),
        _ => Ok(p),
    }
}

#[derive(Serialize)]
struct CellSummary {
    p: f64,
    norm: String,
    checks: u64,
    passed: u64,
    failed: u64,
    worst_margin: f64,
    worst_trial: Option<u64>,
}

fn verify(args: VerifyArgs, pretty: bool) -> Run {
    let grid = match (&args.p_grid, args.p) {
        (Some(g), _) => g.clone(),
        (None, Some(p)) => vec![p],
        (None, None) => unreachable!("clap requires one of --p and --p-grid"),
    };
    if grid.is_empty() {
        return Err(Failure::Invalid("p grid is empty".into()));
    }
    for &p in &grid {
        validate_p(p)?;
    }
    if args.trials == 0 {
        return Err(Failure::Invalid("trials must be at least 1".into()));
    }
    if args.dim == 0 {
        return Err(Failure::Invalid("dim must be at least 1".into()));
    }
    if args.paper_pair && args.dim != 2 {
        return Err(Failure::Invalid(format!("--paper-pair needs --dim 2, got {}", args.dim)));
    }
    let norms: Vec<NormSpec64> = match args.norm {
        Some(spec) => {
            spec.validate(args.dim)?;
            if spec.is_quasi() {
                return Err(Failure::Invalid(format!("{spec} is only a quasi-norm")));
            }
            vec![spec]
        }
        None => NormSpec64::test_family(args.dim),
    };
    let norm_flag = args.norm.map(|n| format!(" --norm {n}")).unwrap_or_default();
    announce(&format!(
        "kappa{} verify --p-grid {} --trials {} --dim {} --seed {}{norm_flag}{}",
        flag(pretty),
        join(&grid),
        args.trials,
        args.dim,
        args.seed,
        if args.paper_pair { " --paper-pair" } else { "" }
    ));

    let labels: Vec<String> =
        std::iter::once("trace-chain".to_string()).chain(norms.iter().map(|n| n.to_string())).collect();
    let mut cells: Vec<CellSummary> = grid
        .iter()
        .flat_map(|&p| {
            labels.iter().map(move |norm| CellSummary {
                p,
                norm: norm.clone(),
                checks: 0,
                passed: 0,
                failed: 0,
                worst_margin: f64::INFINITY,
                worst_trial: None,
            })
        })
        .collect();
    let mut builtin_reports: Vec<InequalityReport<f64>> = Vec::new();

    for trial in 0..args.trials {
        let (a, b) = if args.paper_pair && trial == 0 {
            let (a, b, _) = paper_triple::<f64>();
            (a, b)
        } else {
            let mut rng = stream_rng(args.seed, trial);
            (random_psd_with(args.dim, 1.0, &mut rng)?, random_psd_with(args.dim, 1.0, &mut rng)?)
        };
        for (pi, &p) in grid.iter().enumerate() {
            let mut reports = vec![check_trace_inequality(&a, &b, p)?];
            for &spec in &norms {
                reports.push(check_uinorm_inequality(&a, &b, p, spec)?);
            }
            for (ni, report) in reports.iter().enumerate() {
                let cell = &mut cells[pi * labels.len() + ni];
                cell.checks += 1;
                if report.passed {
                    cell.passed += 1;
                } else {
                    cell.failed += 1;
                    eprintln!("failed: trial {trial} p {p} {}: margins {:?}", cell.norm, report.margins);
                }
                let worst = report.worst_margin();
                if worst < cell.worst_margin {
                    cell.worst_margin = worst;
                    cell.worst_trial = Some(trial);
                }
            }
            if args.paper_pair && trial == 0 {
                builtin_reports.push(reports.swap_remove(0));
            }
        }
    }

    let all_passed = cells.iter().all(|c| c.failed == 0);
    if pretty {
        println!("{:>10}  {:<14} {:>8} {:>8} {:>8} {:>14}", "p", "norm", "checks", "passed", "failed", "worst margin");
        for c in &cells {
            println!(
                "{:>10}  {:<14} {:>8} {:>8} {:>8} {:>14.6e}",
                c.p, c.norm, c.checks, c.passed, c.failed, c.worst_margin
            );
        }
        for r in &builtin_reports {
            println!("built-in pair, p = {}: trace margins {:?}", r.p, r.margins);
        }
        println!("{}", if all_passed { "all checks passed" } else { "SOME CHECKS FAILED" });
    }
    let mut value = json!({
        "p_grid": grid,
        "trials": args.trials,
        "dim": args.dim,
        "seed": args.seed,
        "cells": cells,
        "passed": all_passed,
    });
    if args.paper_pair {
        value["paper_pair"] = serde_json::to_value(&builtin_reports).expect("reports serialize");
    }
    Ok((value, all_passed))
}

fn counterexample(pretty: bool) -> Run {
    announce(&format!("kappa{} counterexample", flag(pretty)));
    let report = counterexample_report()?;
    let failures = report.failures();
    for f in &failures {
        eprintln!("failed: {f}");
    }
    if pretty {
        println!("p = {}", report.p);
        println!("d²(A,B)         {:.15}", report.d2_ab);
        println!("d²(A,C)         {:.15}", report.d2_ac);
        println!("d²(B,C)         {:.15}", report.d2_bc);
        println!("triangle margin {:.6e}", report.triangle_margin);
        println!("gap             {:.6e}", report.gap);
        println!("{:<52} {:>22} {:>22} {:>10}", "check", "computed", "closed form", "deviation");
        for c in &report.checks {
            println!(
                "{:<52} {:>22.15e} {:>22.15e} {:>10.2e}{}",
                c.name,
                c.computed,
                c.reference,
                c.deviation,
                if c.ok { "" } else { "  FAIL" }
            );
        }
        println!("{}", if failures.is_empty() { "reproduced" } else { "NOT REPRODUCED" });
    }
    let value = serde_json::to_value(&report).expect("report serializes");
    Ok((value, failures.is_empty()))
}

fn search(args: SearchArgs, pretty: bool) -> Run {
    let (grid, grid_flags) = match &args.p_grid {
        Some(g) => (g.clone(), format!("--p-grid {}", join(g))),
        None => {
            for p in [args.p_min, args.p_max] {
                validate_p(p)?;
            }
            (
                linear_grid(args.p_min, args.p_max, args.p_steps)?,
                format!("--p-min {} --p-max {} --p-steps {}", args.p_min, args.p_max, args.p_steps),
            )
        }
    };
    let mut config = SearchConfig::new(grid, args.dim, args.trials, args.seed);
    config.scale = args.scale;
    config.include_paper_triple = args.include_paper_triple;
    config.perturbation_radius = args.perturb;
    config.noise_band = args.tol;
    config.sampler = match args.sampler {
        SamplerArg::Wishart => Sampler::Wishart,
        SamplerArg::CommutingDiagonal => Sampler::CommutingDiagonal,
    };
    config.validate()?;
    if config.p_grid.iter().any(|&p| p > MAX_P) {
        return Err(Failure::Invalid(format!("p must not exceed {MAX_P:e}")));
    }
    let sampler = match args.sampler {
        SamplerArg::Wishart => "wishart",
        SamplerArg::CommutingDiagonal => "commuting-diagonal",
    };
    announce(&format!(
        "kappa{} search {grid_flags} --dim {} --trials {} --seed {} --scale {} --perturb {} --sampler {sampler} --tol {} --threads {}{}{}",
        flag(pretty),
        args.dim,
        args.trials,
        args.seed,
        args.scale,
        args.perturb,
        args.tol,
        args.threads,
        if args.include_paper_triple { " --include-paper-triple" } else { "" },
        args.out.as_ref().map(|o| format!(" --out {}", o.display())).unwrap_or_default(),
    ));

    let result = scan(&config, args.threads)?;
    for s in &result.skipped {
        eprintln!("skipped trial {} ({:?}, p {:?}): {}", s.trial, s.provenance, s.p, s.message);
    }

    let mut files = Vec::new();
    if let Some(dir) = &args.out {
        let io = |e: std::io::Error| Failure::Invalid(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        let summary_path = dir.join("summary.csv");
        let violations_path = dir.join("violations.jsonl");
        write_summary_csv(&result.summary, BufWriter::new(File::create(&summary_path).map_err(io)?)).map_err(io)?;
        let mut out = BufWriter::new(File::create(&violations_path).map_err(io)?);
        write_violations_jsonl(&result.violations, &mut out).map_err(io)?;
        out.flush().map_err(io)?;
        files.push(summary_path.display().to_string());
        files.push(violations_path.display().to_string());
    }

    if pretty {
        println!(
            "{:>10} {:>8} {:>11} {:>13} {:>7} {:>14}",
            "p", "trials", "violations", "inconclusive", "errors", "min margin"
        );
        for s in &result.summary {
            println!(
                "{:>10} {:>8} {:>11} {:>13} {:>7} {:>14.6e}",
                s.p, s.trials, s.violations, s.inconclusive, s.errors, s.min_margin
            );
        }
        println!("A grid point without violations means only that none was found in the trials run.");
        for f in &files {
            println!("wrote {f}");
        }
    }
    let value = json!({
        "config": config,
        "summary": result.summary,
        "violations": result.violations.len(),
        "skipped": result.skipped.len(),
        "files": files,
    });
    Ok((value, true))
}
