//! Command-line front end for `staircase-core`: JSON in, JSON reports out,
//! PGM rasters for pictures, and the acceptance-suite runner.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use report::{Report, SCHEMA};
use suite::Level;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_STRICT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] staircase_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn json(path: &Path, source: serde_json::Error) -> Self {
        CliError::Json {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "staircase", version, about = "Shift-invariant subspaces of the bidisc and torus")]
pub struct Cli {
    /// Treat warnings as errors (exit 3).
    #[arg(long, global = true)]
    pub strict: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run configuration JSON (falls back to $STAIRCASE_CONFIG).
    #[arg(long = "run-config", global = true, value_name = "PATH")]
    pub run_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice diagrams.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Monomial invariant subspaces.
    #[command(subcommand)]
    Subspace(SubspaceCmd),
    /// Truncated numeric model of the compressed shift pair.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Generalized powers.
    #[command(subcommand)]
    Gp(GpCmd),
    /// Stripe sets on the torus.
    #[command(subcommand)]
    Stripes(StripesCmd),
    /// Case-4 configurations of the torus classification.
    #[command(subcommand)]
    Mainl(MainlCmd),
    /// Worked examples.
    #[command(subcommand)]
    Example(ExampleCmd),
    /// Acceptance suite.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

/// Report destination; stdout when absent.
#[derive(Debug, Args)]
pub struct ReportOut {
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DiagramCmd {
    Classify {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Write the diagram over a window as a PGM raster.
    Render {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// `i0,i1,j0,j1`; defaults to the configured window.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<[i64; 4]>,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum SubspaceCmd {
    Analyze {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_mn: usize,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum PairCmd {
    Analyze {
        #[arg(long, value_name = "PATH")]
        subspace: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_mn: usize,
        #[arg(long)]
        rank_tol: Option<f64>,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExampleCmd {
    /// The non-compatible pair from `x = Σ λ^j w^j`.
    Seto {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        lambda_im: f64,
        /// Last column of the truncation window `[0, N]^2`.
        #[arg(long, default_value_t = 40)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        max_mn: usize,
        #[arg(long)]
        rank_tol: Option<f64>,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum GpCmd {
    /// Assemble a system from a period cell, a unitary and a cyclic vector.
    Build {
        #[arg(long, value_name = "PATH")]
        j0: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "PATH")]
        unitary: PathBuf,
        #[arg(long, value_name = "PATH")]
        e: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        j_max: Option<i64>,
        #[arg(long)]
        margin: Option<usize>,
        /// System JSON destination; the report goes to stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    Verify {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Anti-diagonal realization for an arc set.
    ExampleE1 {
        #[arg(long, value_name = "PATH")]
        gamma: PathBuf,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        j_max: Option<i64>,
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Also write the system JSON here.
        #[arg(long, value_name = "PATH")]
        system_out: Option<PathBuf>,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum StripesCmd {
    /// Raster of `ω^{-1}(γ)` for `ω = (w^m z̄^n)^l`.
    Preimage {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        l: u64,
        #[arg(long, value_name = "PATH")]
        gamma: PathBuf,
        #[arg(long = "M")]
        big_m: Option<usize>,
        /// PGM destination; the report goes to stdout.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Checks on the Fourier-side projector of multiplication by `χ_δ`.
    Helson {
        #[arg(long, value_name = "PATH")]
        delta: PathBuf,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum MainlCmd {
    Check {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum SuiteCmd {
    Run {
        #[arg(long, value_enum, default_value_t = Level::Smoke)]
        level: Level,
        #[arg(long)]
        rank_tol: Option<f64>,
        #[command(flatten)]
        report: ReportOut,
    },
}

fn parse_window(s: &str) -> Result<[i64; 4], String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let w: [i64; 4] = parts
        .try_into()
        .map_err(|v: Vec<i64>| format!("expected i0,i1,j0,j1, got {} values", v.len()))?;
    if w[0] > w[1] || w[2] > w[3] {
        return Err(format!("window {s} is empty"));
    }
    Ok(w)
}

/// What a command hands back for the report envelope.
#[derive(Debug)]
pub struct Outcome {
    pub results: serde_json::Value,
    pub warnings: Vec<String>,
    pub report_out: Option<PathBuf>,
    /// A suite criterion failed.
    pub failed: bool,
}

/// Parse `args` (program name first), run the command and return the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let outcome = RunConfig::discover(cli.run_config.as_deref())
        .and_then(|cfg| commands::execute(&cli, &cfg).map(|o| (cfg, o)));
    let (cfg, outcome) = match outcome {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let report = Report {
        schema: SCHEMA,
        command: echo,
        results: outcome.results,
        warnings: outcome.warnings,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = report.to_json();
    match &outcome.report_out {
        Some(p) => {
            let p = cfg.output_path(p);
            if let Err(e) = commands::write_file(&p, text.as_bytes()) {
                eprintln!("error: {e}");
                return EXIT_INVALID;
            }
        }
        None => print!("{text}"),
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if outcome.failed {
        EXIT_SUITE_FAILED
    } else if cli.strict && !report.warnings.is_empty() {
        EXIT_STRICT
    } else {
        EXIT_OK
    }
}
