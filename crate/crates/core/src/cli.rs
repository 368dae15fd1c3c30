//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the exit code with everything destined for stdout and
//! stderr, so the binary only prints.
//!
//! Exit codes: 0 success, 2 an inequality failed, 64 usage error, 65 bad
//! input data or range, 66 symmetric mode on an asymmetric body, 70 internal
//! numerical failure, 74 i/o error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::functionals::OverlapOptions;
use crate::geom::{io::write_atomic, read_body, ConvexBody, RngSeed};
use crate::lab::{
    box_conjecture_experiment, corpus_pair, corpus_symmetric, derive_bm_from_iso, rows_to_csv, verify_bm,
    verify_classical, verify_dar, verify_isoperimetric, worst_case_search, ConstantMode, InequalityReport,
    VerifyOptions,
};
use crate::meanineq::{amgm_suite, SuiteConfig};
use crate::transport::{
    asymmetry_gradient_bound_check, chain_suite, default_neighbors, discrete_brenier, local_jacobians, trace_suite,
    ChainSuiteConfig,
};

pub const SCHEMA: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NOT_SYMMETRIC: i32 = 66;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "WULFF_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "wulff-lab", version, about = "Numerical checks of stable Wulff and Brunn-Minkowski inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Randomised suite for the stable AM-GM and root-ratio inequalities.
    Amgm(AmgmArgs),
    /// Check an inequality on body files or on a random corpus.
    Verify(VerifyArgs),
    /// Box-family lower bound on the Brunn-Minkowski constant.
    Conjecture(ConjectureArgs),
    /// Discrete transport diagnostics.
    Transport(TransportArgs),
    /// Random search for pairs forcing a large Brunn-Minkowski constant.
    Search(SearchArgs),
}

#[derive(Debug, Args, Serialize)]
struct AmgmArgs {
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    /// Fixed tuple length; random in 2..=16 when absent.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    /// Stable Wulff inequality.
    Iso,
    /// Stable Brunn-Minkowski inequality.
    Bm,
    /// Overlap-volume lower bound on the Minkowski sum.
    Dar,
    /// Classical Wulff and Brunn-Minkowski inequalities.
    Classical,
    /// Passage from the stable Wulff to the stable Brunn-Minkowski inequality.
    Derive,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    Body,
    General,
    Symmetric,
}

impl From<Mode> for ConstantMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Body => ConstantMode::BodySpecific,
            Mode::General => ConstantMode::General,
            Mode::Symmetric => ConstantMode::Symmetric,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, requires = "l", conflicts_with = "random")]
    k: Option<PathBuf>,
    #[arg(long, requires = "k")]
    l: Option<PathBuf>,
    /// Use the reproducible random corpus instead of files.
    #[arg(long, required_unless_present = "k")]
    random: bool,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=12))]
    n: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pairs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Constant for the isoperimetric check.
    #[arg(long, value_enum, default_value_t = Mode::Body)]
    mode: Mode,
    /// Relative tolerance on `lhs >= rhs`.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ConjectureArgs {
    /// Dimension range `a..b` (inclusive) or a single dimension.
    #[arg(long, default_value = "2..10")]
    n: String,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.02, 0.01, 0.005])]
    eps: Vec<f64>,
    /// CSV destination; rows are included in the JSON summary when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct TransportArgs {
    #[command(subcommand)]
    #[serde(flatten)]
    what: TransportCommand,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "diagnostic", rename_all = "kebab-case")]
enum TransportCommand {
    /// Discrete map between two bodies, default `[0,1]² -> [0,2]×[0,1/2]`.
    Map {
        #[arg(long, requires = "l")]
        k: Option<PathBuf>,
        #[arg(long, requires = "k")]
        l: Option<PathBuf>,
        #[arg(long, default_value_t = 2048, value_parser = clap::value_parser!(u64).range(2..))]
        samples: u64,
        /// Neighbours per local fit; `max(2n+2, 12)` when absent.
        #[arg(long)]
        neighbors: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain of mean inequalities on random eigenvalue tuples.
    Chain {
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 2)]
        min_dim: usize,
        #[arg(long, default_value_t = 10)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Planar trace inequality on random polygons and functions.
    Trace {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Serialize)]
struct SearchArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=6))]
    n: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::DegenerateInput { .. } | Error::DimensionMismatch { .. } | Error::InvalidArgument(_) => {
            EXIT_DATA
        }
        Error::NotCentrallySymmetric { .. } => EXIT_NOT_SYMMETRIC,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_SOFTWARE,
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads_from_env() {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return Outcome::error(EXIT_SOFTWARE, e),
    };
    pool.install(|| dispatch(cli.command)).unwrap_or_else(|e| Outcome::error(exit_code(&e), e))
}

type Run = crate::error::Result<Outcome>;

fn document(command: &str, config: &impl Serialize, result: Value) -> String {
    let doc = json!({ "schema": SCHEMA, "command": command, "config": config, "result": result });
    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialise");
    s.push('\n');
    s
}

/// Writes `text` to `out` atomically, or returns it for stdout.
fn emit(text: String, out: Option<&Path>) -> crate::error::Result<String> {
    match out {
        Some(path) => {
            write_atomic(path, text.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn finish(pass: bool, text: String, out: Option<&Path>, failure: String) -> Run {
    Ok(Outcome {
        code: if pass { EXIT_OK } else { EXIT_VIOLATION },
        stdout: emit(text, out)?,
        stderr: failure,
    })
}

fn value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

fn dispatch(command: Command) -> Run {
    match command {
        Command::Amgm(a) => amgm(&a),
        Command::Verify(a) => verify(&a),
        Command::Conjecture(a) => conjecture(&a),
        Command::Transport(a) => transport(&a),
        Command::Search(a) => search(&a),
    }
}

fn amgm(a: &AmgmArgs) -> Run {
    let report = amgm_suite(&SuiteConfig {
        count: a.count as usize,
        n: a.n.map(|n| n as usize),
        seed: a.seed,
        tolerance: a.tol,
    });
    let failure = report
        .offending
        .iter()
        .map(|v| format!("violation: {} residual {:e} tuple {:?} seed {} index {}\n", v.check, v.residual, v.tuple, v.seed, v.index))
        .collect();
    finish(report.violations == 0, document("amgm", a, value(&report)), a.out.as_deref(), failure)
}

fn failures(reports: &[InequalityReport]) -> String {
    reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("failed: {:?} lhs {:e} rhs {:e} k {} l {}\n", r.name, r.lhs, r.rhs, r.inputs.k, r.inputs.l))
        .collect()
}

fn verify(a: &VerifyArgs) -> Run {
    let opts = VerifyOptions { overlap: OverlapOptions::default(), rel_tol: a.tol };
    let pairs: Vec<(ConvexBody, ConvexBody, Option<u64>)> = match (&a.k, &a.l) {
        (Some(k), Some(l)) => vec![(read_body(k)?, read_body(l)?, None)],
        _ => (0..a.pairs)
            .map(|i| {
                let (k, l) = corpus_pair(a.n as usize, a.seed, i)?;
                let k = if a.mode == Mode::Symmetric && matches!(a.kind, Kind::Iso) {
                    corpus_symmetric(a.n as usize, a.seed, i)?
                } else {
                    k
                };
                Ok((k, l, Some(i)))
            })
            .collect::<crate::error::Result<_>>()?,
    };
    let tag = |r: InequalityReport, i: Option<u64>| match i {
        Some(i) => r.with_seed(a.seed, i),
        None => r,
    };
    if let Kind::Derive = a.kind {
        let mut all = Vec::new();
        let mut pass = true;
        let mut failure = String::new();
        for (k, l, i) in &pairs {
            let mut d = derive_bm_from_iso(k, l, &opts)?;
            d.final_bound = tag(d.final_bound, *i);
            let ok = d.triangle_holds && d.weighted_holds && d.final_bound.pass;
            if !ok {
                failure.push_str(&format!("failed: derivation on {} / {}\n", k.label(), l.label()));
            }
            pass &= ok;
            all.push(d);
        }
        let result = json!({ "pairs": all.len(), "pass": pass, "derivations": all });
        return finish(pass, document("verify", a, result), a.out.as_deref(), failure);
    }
    let mut reports = Vec::new();
    for (k, l, i) in &pairs {
        match a.kind {
            Kind::Iso => reports.push(tag(verify_isoperimetric(k, l, a.mode.into(), &opts)?, *i)),
            Kind::Bm => reports.push(tag(verify_bm(k, l, &opts)?, *i)),
            Kind::Dar => reports.push(tag(verify_dar(k, l, &opts)?, *i)),
            Kind::Classical => reports.extend(verify_classical(k, l, &opts)?.map(|r| tag(r, *i))),
            Kind::Derive => unreachable!(),
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let max_ratio = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let result = json!({
        "pairs": pairs.len(),
        "failures": failed,
        "max_ratio": max_ratio,
        "reports": reports,
    });
    finish(failed == 0, document("verify", a, result), a.out.as_deref(), failures(&reports))
}

fn parse_range(s: &str) -> crate::error::Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("bad dimension range `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo < 2 || hi < lo {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn conjecture(a: &ConjectureArgs) -> Run {
    let dims = parse_range(&a.n)?;
    let table = box_conjecture_experiment(&dims, &a.eps)?;
    let mut summary = json!({ "dims": table.dims, "fit": table.fit });
    if table.fit.is_none() {
        summary["note"] = json!("exponent fit skipped: a single dimension gives no slope");
    }
    match &a.out {
        Some(path) => write_atomic(path, rows_to_csv(&table.rows)?.as_bytes())?,
        None => summary["rows"] = value(&table.rows),
    }
    let mut stdout = document("conjecture", a, summary);
    if let Some(f) = &table.fit {
        stdout.push_str(&match (f.band, f.stderr) {
            (Some([lo, hi]), Some(se)) => {
                format!("exponent {:.4} (stderr {:.4}, band [{lo:.4}, {hi:.4}])\n", f.exponent, se)
            }
            _ => format!("exponent {:.4} (no stderr from two points)\n", f.exponent),
        });
    }
    Ok(Outcome { code: EXIT_OK, stdout, stderr: String::new() })
}

fn transport(a: &TransportArgs) -> Run {
    match &a.what {
        TransportCommand::Map { k, l, samples, neighbors, seed, out } => {
            let (k, l) = match (k, l) {
                (Some(k), Some(l)) => (read_body(k)?, read_body(l)?),
                _ => (
                    ConvexBody::cube(2, 0.0, 1.0)?,
                    ConvexBody::axis_box(&[0.0, 0.0], &[2.0, 0.5], "box([0,2]x[0,1/2])")?,
                ),
            };
            let map = discrete_brenier(&k, &l, *samples as usize, RngSeed::new(*seed, 0))?;
            let fit = map.affine_fit()?;
            let jac = local_jacobians(&map, neighbors.unwrap_or_else(|| default_neighbors(k.dim())))?;
            let bound = asymmetry_gradient_bound_check(&k, &l, &map, &OverlapOptions::default())?;
            let rows: Vec<Vec<f64>> = (0..fit.matrix.nrows()).map(|i| fit.matrix.row(i).iter().copied().collect()).collect();
            let result = json!({
                "samples": map.len(),
                "mean_squared_displacement": map.cost,
                "best_swap_gain": map.best_swap_gain(),
                "fitted_matrix": rows,
                "fitted_shift": fit.shift.as_slice(),
                "volume_ratio": map.volume_ratio,
                "local": {
                    "anchors": jac.jacobians.len(),
                    "skipped_boundary": jac.skipped_boundary,
                    "skipped_ill_conditioned": jac.skipped_ill_conditioned,
                    "quality": jac.quality,
                    "median_determinant": jac.median_determinant,
                    "min_eigenvalue": jac.min_eigenvalue,
                    "max_eigenvalue": jac.max_eigenvalue,
                },
                "gradient_bound": bound,
            });
            let failure = if bound.holds { String::new() } else { "failed: asymmetry gradient bound\n".into() };
            finish(bound.holds, document("transport", a, result), out.as_deref(), failure)
        }
        TransportCommand::Chain { count, min_dim, max_dim, seed, out } => {
            let config = ChainSuiteConfig { count: *count as usize, min_dim: *min_dim, max_dim: *max_dim, seed: *seed };
            if config.min_dim < 1 || config.max_dim < config.min_dim {
                return Err(Error::InvalidArgument(format!("bad dimension range {min_dim}..{max_dim}")));
            }
            let report = chain_suite(&config)?;
            let failed: Vec<_> = report.tallies.iter().filter(|t| t.violations > 0).collect();
            let failure = failed.iter().map(|t| format!("violations: {} x{}\n", t.name, t.violations)).collect();
            finish(failed.is_empty(), document("transport", a, value(&report)), out.as_deref(), failure)
        }
        TransportCommand::Trace { count, seed, out } => {
            let report = trace_suite(*count as usize, *seed)?;
            let failure =
                if report.violations == 0 { String::new() } else { format!("violations: {}\n", report.violations) };
            finish(report.violations == 0, document("transport", a, value(&report)), out.as_deref(), failure)
        }
    }
}

fn search(a: &SearchArgs) -> Run {
    let report = worst_case_search(a.n as usize, a.budget as usize, a.seed, &OverlapOptions::default())?;
    Ok(Outcome { code: EXIT_OK, stdout: emit(document("search", a, value(&report)), a.out.as_deref())?, stderr: String::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("wulff-lab").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["amgm", "--count", "0"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["bogus"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).code, EXIT_OK);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_range("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_range("5").unwrap(), vec![5]);
        for bad in ["8..2", "1..3", "x", ""] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
        assert_eq!(run_args(&["conjecture", "--n", "8..2"]).code, EXIT_DATA);
        assert_eq!(run_args(&["conjecture", "--n", "2", "--eps=-0.1"]).code, EXIT_DATA);
    }

    #[test]
    fn amgm_report_is_reproducible() {
        let a = run_args(&["amgm", "--count", "1000", "--n", "4", "--seed", "7"]);
        assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
        assert!(a.stdout.contains("\"schema\": 1"));
        assert_eq!(a, run_args(&["amgm", "--count", "1000", "--n", "4", "--seed", "7"]));
    }
}
