// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for `impdens`.
//!
//! Every subcommand reads one problem (a JSON file via `--spec` or a
//! built-in via `--example`) and writes plain text. Exit codes:
//! `0` success, `2` bad input or usage, `3` map not monotone or not finite,
//! `4` support mismatch, `5` numerical failure or failed verification.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use impdens::distributions::DistributionError;
use impdens::problem::{builtin_example, format_number};
use impdens::verify::run_full_verification;
use impdens::{
    GridSeries, GridSpec, ImplicitDensity, ProblemError, ProblemSpec, TransformError, VerifyError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_MONOTONE: i32 = 3;
pub const EXIT_SUPPORT: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "impdens", version, about = "Law of X from f(X) = A for a strictly monotone map f")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the density of X as CSV (t,pdf).
    Density(GridArgs),
    /// Tabulate the CDF of X as CSV (t,cdf).
    Cdf(GridArgs),
    /// Print the p-quantile of X.
    Quantile {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        p: f64,
    },
    /// Draw seeded samples of X as CSV (x).
    Sample {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run normalization, KS and CDF/density checks; print key=value lines.
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Density series of a built-in worked example over its own grid.
    Figure {
        #[arg(long)]
        example: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ProblemSource {
    /// Problem file: {"f": ..., "domain": [lo, hi], "A": {...}, "grid": [lo, hi, n]?}
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Built-in worked example 1-4.
    #[arg(long)]
    example: Option<u32>,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    #[command(flatten)]
    source: ProblemSource,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// LO:HI:N, giving N+1 nodes. Defaults to the problem's own grid.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<ProblemError> for Failure {
    fn from(e: ProblemError) -> Self {
        let code = match e {
            ProblemError::NonFinite { .. } => EXIT_NOT_MONOTONE,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        let code = match &e {
            TransformError::Parse(_) | TransformError::InvalidInput(_) => EXIT_INPUT,
            TransformError::NotMonotone { .. } | TransformError::NonFinite { .. } => EXIT_NOT_MONOTONE,
            TransformError::SupportMismatch(_) => EXIT_SUPPORT,
            TransformError::Distribution(DistributionError::Numerics(_)) => EXIT_NUMERICAL,
            TransformError::Distribution(_) => EXIT_INPUT,
            TransformError::Numerics(_) => EXIT_NUMERICAL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        let code = match e {
            VerifyError::InvalidInput(_) => EXIT_INPUT,
            _ => EXIT_NUMERICAL,
        };
        Failure::new(code, e.to_string())
    }
}

fn load(args: &ProblemArgs) -> Result<ProblemSpec, Failure> {
    match (&args.source.spec, args.source.example) {
        (Some(path), _) => Ok(ProblemSpec::load(path)?),
        (None, Some(id)) => builtin_example(id)
            .ok_or_else(|| Failure::new(EXIT_INPUT, format!("unknown example {id}; expected 1-4"))),
        (None, None) => Err(Failure::new(EXIT_INPUT, "one of --spec or --example is required")),
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let written = match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    written.map_err(|m| Failure::new(EXIT_INPUT, m))
}

fn tabulate(args: &GridArgs, column: &str, value: fn(&ImplicitDensity, f64) -> f64, stdout: &mut dyn Write) -> Result<(), Failure> {
    let spec = load(&args.problem)?;
    let grid = args
        .grid
        .or(spec.grid)
        .ok_or_else(|| Failure::new(EXIT_INPUT, "no grid: pass --grid LO:HI:N or add \"grid\" to the problem file"))?;
    let d = spec.build()?;
    let series = GridSeries::tabulate(&grid, |t| value(&d, t))?;
    emit(&args.out, &series.to_csv(column), stdout)
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Density(args) => tabulate(&args, "pdf", ImplicitDensity::pdf_x, stdout),
        Command::Cdf(args) => tabulate(&args, "cdf", ImplicitDensity::cdf_x, stdout),
        Command::Quantile { problem, p } => {
            let d = load(&problem)?.build()?;
            let q = d.quantile_x(p)?;
            emit(&None, &format!("{}\n", format_number(q)), stdout)
        }
        Command::Sample { problem, n, seed, out } => {
            let d = load(&problem)?.build()?;
            let mut text = String::from("x\n");
            for x in d.sample_n(n, seed) {
                if !x.is_finite() {
                    return Err(Failure::new(EXIT_NUMERICAL, "sampler produced a non-finite value"));
                }
                text.push_str(&format_number(x));
                text.push('\n');
            }
            emit(&out, &text, stdout)
        }
        Command::Verify { problem, n, seed } => {
            let d = load(&problem)?.build()?;
            let report = run_full_verification(&d, n, seed)?;
            emit(&None, &format!("{report}\n"), stdout)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::new(EXIT_NUMERICAL, "verification failed"))
            }
        }
        Command::Figure { example, out } => {
            let spec = builtin_example(example)
                .ok_or_else(|| Failure::new(EXIT_INPUT, format!("unknown example {example}; expected 1-4")))?;
            let grid = spec.grid.expect("built-in examples carry a grid");
            let d = spec.build()?;
            let series = GridSeries::tabulate(&grid, |t| d.pdf_x(t))?;
            emit(&out, &series.to_csv("pdf"), stdout)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
