//! spectralab: random-matrix spectra and signed-sum concentration
//! experiments driven by JSON configs.
//!
//! Exit codes: 0 success, 2 config or usage error (including a refusal to
//! overwrite without --force), 3 computation failure.

mod artifacts;
mod config;
mod runner;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

#[derive(Debug)]
pub enum CliError {
    /// Malformed config or usage; exits with code 2.
    Config(String),
    /// Failure while computing or writing artifacts; exits with code 3.
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Runtime(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<spectralab_core::error::Error> for CliError {
    fn from(e: spectralab_core::error::Error) -> Self {
        use spectralab_core::error::Error as E;
        match e {
            // Domain violations are config errors; everything else is a
            // failure of the computation itself.
            E::NotSquare { .. }
            | E::DimensionMismatch { .. }
            | E::InvalidParameter(_)
            | E::InvalidDistribution(_)
            | E::OddBlockDimension { .. }
            | E::BudgetExceeded { .. }
            | E::Config(_) => CliError::Config(e.to_string()),
            E::NoConvergence { .. } | E::PseudospectrumProximity { .. } | E::Io(_) => {
                CliError::Runtime(e.to_string())
            }
        }
    }
}

/// Shared flags for every config-driven subcommand.
#[derive(Debug, Args)]
struct RunArgs {
    /// Path to the JSON config for this subcommand.
    #[arg(long)]
    config: PathBuf,
    /// Directory receiving the artifacts (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed in the config; the echoed config records the
    /// value actually used.
    #[arg(long)]
    seed: Option<u64>,
    /// Overwrite existing artifact files.
    #[arg(long)]
    force: bool,
    /// Worker threads for the parallel parts; defaults to all cores.
    /// Outputs are identical regardless of the thread count.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Parser)]
#[command(
    name = "spectralab",
    version,
    about = "Random-matrix spectra and signed-sum concentration experiments",
    long_about = "Random-matrix spectra and signed-sum concentration experiments.\n\
        Every config-driven subcommand reads a JSON config, writes its\n\
        artifacts into --out, and echoes the fully resolved config to\n\
        config.echo.json so the run can be reproduced byte for byte.\n\
        Floats are printed with 17 significant digits."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of one draw of shift + noise/sqrt(n)
    #[command(after_help = "Artifacts:\n  \
        result.csv   quantity,value: atom_count, disk_mass_<r> per radius,\n               \
        and law_distance when a reference law is configured\n  \
        atoms.csv    re,im: one eigenvalue per row\n  \
        scatter.svg  static scatter plot (only with \"scatter\": true)\n  \
        config.echo.json  resolved config, reusable via --config")]
    Esd(RunArgs),
    /// Bernoulli vs Gaussian spectra under one shared shift
    #[command(after_help = "Artifacts:\n  \
        result.csv           quantity,value: atom_count, distance\n  \
        atoms_bernoulli.csv  re,im per eigenvalue\n  \
        atoms_gaussian.csv   re,im per eigenvalue\n  \
        distances.csv        pair,distance\n  \
        scatter_*.svg        static scatter plots (only with \"scatter\": true)\n  \
        config.echo.json     resolved config")]
    Universality(RunArgs),
    /// Exact signed-sum distribution of an integer vector
    #[command(after_help = "Artifacts:\n  \
        result.csv   value,count,probability: the full exact law of the\n               \
        random signed sum, denominators 2^n\n  \
        summary.csv  quantity,value: n, mode_value, mode_probability,\n               \
        sharp_bound (zero-free vectors), collision_ratio_<k>\n  \
        config.echo.json  resolved config")]
    Lo(RunArgs),
    /// Concentration of progression-sampled coefficients vs pigeonhole bound
    #[command(after_help = "Artifacts:\n  \
        result.csv   trial,probability,pigeonhole_bound,ratio\n  \
        summary.csv  quantity,value: rank, volume, proper, pigeonhole_bound,\n               \
        trials, pass_fraction\n  \
        config.echo.json  resolved config")]
    Gap(RunArgs),
    /// Tail of the inverse smallest singular value under perturbation
    #[command(after_help = "Artifacts:\n  \
        result.csv   x,survival,bound: fraction of trials with\n               \
        1/sigma_min >= x next to the sqrt(n)/x reference curve\n  \
        summary.csv  quantity,value: trials, failed_trials\n  \
        config.echo.json  resolved config")]
    Condition(RunArgs),
    /// Distance from a random row to the span of most of the others
    #[command(after_help = "Artifacts:\n  \
        result.csv   trial,distance,threshold\n  \
        summary.csv  quantity,value: threshold, min_distance, below_threshold\n  \
        config.echo.json  resolved config")]
    Distance(RunArgs),
    /// Run the built-in identity suite; exits 0 iff every check passes
    Verify,
}

fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}

fn set_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(t) = threads else { return Ok(()) };
    if t == 0 {
        return Err(CliError::Config("--threads must be positive".into()));
    }
    // A second invocation in the same process (tests) keeps the first
    // pool; thread count never affects results, only wall time.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    Ok(())
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Esd(args) => {
            set_threads(args.threads)?;
            let mut cfg: config::EsdConfig = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            runner::run_esd(&cfg, &args.out, args.force)
        }
        Command::Universality(args) => {
            set_threads(args.threads)?;
            let mut cfg: config::UniversalityConfig = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            runner::run_universality(&cfg, &args.out, args.force)
        }
        Command::Lo(args) => {
            set_threads(args.threads)?;
            let cfg: config::LoConfig = load_config(&args.config)?;
            if args.seed.is_some() {
                return Err(CliError::Config(
                    "lo is deterministic; --seed does not apply".into(),
                ));
            }
            runner::run_lo(&cfg, &args.out, args.force)
        }
        Command::Gap(args) => {
            set_threads(args.threads)?;
            let mut cfg: config::GapConfig = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            runner::run_gap(&cfg, &args.out, args.force)
        }
        Command::Condition(args) => {
            set_threads(args.threads)?;
            let mut cfg: config::ConditionConfig = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            runner::run_condition(&cfg, &args.out, args.force)
        }
        Command::Distance(args) => {
            set_threads(args.threads)?;
            let mut cfg: config::DistanceConfig = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            runner::run_distance(&cfg, &args.out, args.force)
        }
        Command::Verify => runner::run_verify(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Config(_) => ExitCode::from(2),
                CliError::Runtime(_) => ExitCode::from(3),
            }
        }
    }
}
