//! Command-line front end of the `flatsketch` binary.
//!
//! Points come in as headerless CSV, reports go out as JSON with a fixed
//! field order, and every report embeds the resolved configuration. Exit
//! codes: 0 pass, 1 fail, 2 usage error, 3 I/O or input-format error.

mod commands;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::clustering::Solver;
use crate::error::Error;
use crate::geometry::Norm;
use crate::projection::{DEFAULT_CORESET_CONSTANT, DEFAULT_LAMBDA};

pub use verify::Suite;

/// Seed used when none is given, so bare invocations reproduce.
pub const DEFAULT_SEED: u64 = 0x5eed;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "flatsketch", version, about = "Random projections for projective clustering")]
pub struct Cli {
    /// Worker threads for parallel loops.
    #[arg(long, global = true, env = "FLATSKETCH_THREADS")]
    pub threads: Option<usize>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Project a point file to the target dimension.
    Project(ProjectArgs),
    /// Build a single-center coreset.
    Coreset(CoresetArgs),
    /// Solve a projective clustering problem.
    Cluster(ClusterArgs),
    /// One pass over a point file with the streaming engine.
    Stream(StreamArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

/// Options shared by the dimension formula.
#[derive(Debug, Clone, Args, Serialize)]
pub struct DimensionArgs {
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Norm: a positive integer or `inf`.
    #[arg(long, default_value_t = Norm::TWO)]
    pub rho: Norm,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
    #[arg(long, default_value_t = DEFAULT_CORESET_CONSTANT)]
    pub coreset_constant: f64,
    /// Target dimension, replacing the formula (capped at d).
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ProjectArgs {
    pub input: PathBuf,
    /// Projected points are written here.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also save the projection matrix (binary `.proj` format).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub dim: DimensionArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Greedy,
    Fw,
    Meb,
}

#[derive(Debug, Args, Serialize)]
pub struct CoresetArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Greedy)]
    pub method: Method,
    #[arg(long, default_value_t = Norm::TWO)]
    pub rho: Norm,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Write the coreset record here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClusterArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Solve in the projected space and lift back.
    #[arg(long)]
    pub via_projection: bool,
    /// auto, brute-force, k-center, lloyd or alternating.
    #[arg(long, default_value = "auto", value_parser = parse_solver)]
    pub solver: Solver,
    #[command(flatten)]
    #[serde(flatten)]
    pub dim: DimensionArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct StreamArgs {
    pub input: PathBuf,
    /// Stream length known in advance.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value = "auto", value_parser = parse_solver)]
    pub solver: Solver,
    /// Save the state after the pass as `<base>.proj` and `<base>.buf`.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from a saved state instead of starting fresh.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub dim: DimensionArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Point file; Gaussian points of size n x d otherwise.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub d: usize,
    /// Subset size for the subspace and flat suites, face size for simplex-lb.
    #[arg(long, default_value_t = 3)]
    pub c: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub s_max: usize,
    #[arg(long, default_value_t = crate::cech::DEFAULT_C_SLACK)]
    pub c_slack: f64,
    /// Independent projections; passing needs 9 in 10 of them to pass.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Sampled subsets or flats per projection.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub dim: DimensionArgs,
}

fn parse_solver(s: &str) -> Result<Solver, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command produced: its JSON report and whether it passed.
pub(crate) struct Outcome {
    pub report: String,
    pub pass: bool,
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))
}

/// Exit code for an error raised while running a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Parse { .. } | Error::Format(_) | Error::Empty | Error::DimensionMismatch { .. } => EXIT_IO,
        Error::InvalidParameter(_) | Error::Unsupported(_) | Error::BudgetExceeded { .. } => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return EXIT_USAGE;
        }
        // Fails only if a pool already exists, as in repeated in-process runs.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let outcome = match commands::dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.report {
        Some(path) => std::fs::write(path, format!("{}\n", outcome.report)),
        None => writeln!(std::io::stdout(), "{}", outcome.report),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_IO;
    }
    if outcome.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
