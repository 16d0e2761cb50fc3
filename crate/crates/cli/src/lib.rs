//! The `pvd` command-line tool.

pub mod commands;
pub mod error;
pub mod format;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pvd_core::monodromy::continuation::DEFAULT_TOL_MONO;
use pvd_core::monodromy::ContinuationOptions;
use pvd_core::realize::{PipelineOptions, RefineOptions, RENDER_DIGITS};
use pvd_core::series::{Mode, DEFAULT_ORDER, DEFAULT_STEP_FRACTION};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "pvd", version, about = "Series solutions, monodromy, descent and realization of linear systems w' = A(z) w")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Series truncation order.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    pub order: usize,

    /// Fraction of the convergence radius used per continuation step, in (0, 1).
    #[arg(long, global = true, default_value_t = DEFAULT_STEP_FRACTION)]
    pub step_fraction: f64,

    /// Bound on the estimated relative error of each monodromy matrix.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL_MONO)]
    pub tol_mono: f64,

    /// Target monodromy residual of the Newton refinement.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    #[arg(long, global = true, default_value_t = 25)]
    pub max_iter: usize,

    /// Coefficient arithmetic for `solve`.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,

    /// Worker threads for the parallel engines (all cores by default).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Recorded in reports; no stage of the tool draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Where to write the primary artifact (a directory for `realize` and `pipeline`).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated fundamental series at an ordinary point.
    Solve {
        system: PathBuf,
        /// Expansion point, a constant in the system grammar.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        center: String,
    },
    /// Monodromy matrices along loops.
    Monodromy {
        system: PathBuf,
        /// JSON loops file.
        #[arg(long, conflicts_with = "auto")]
        loops: Option<PathBuf>,
        /// Use the standard loop family around the finite poles.
        #[arg(long)]
        auto: bool,
        /// Real base point for `--auto`.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<f64>,
        /// Also compare the conjugate system on mirrored loops.
        #[arg(long)]
        check_conjugation: bool,
    },
    /// Compare the monodromy of the conjugate system on mirrored loops with conjugated monodromy.
    ConjugateCheck {
        system: PathBuf,
        #[arg(long)]
        loops: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<f64>,
    },
    /// Apply a gauge transformation, check one, or search for a constant one.
    Gauge {
        system: PathBuf,
        /// Gauge matrix file; prints the transformed system.
        #[arg(long, required_unless_present = "find")]
        by: Option<PathBuf>,
        /// With `--by`: system the result must equal.
        #[arg(long, requires = "by")]
        check: Option<PathBuf>,
        /// Search a constant gauge taking the system to this one.
        #[arg(long, conflicts_with = "by")]
        find: Option<PathBuf>,
    },
    /// Descend a system to a real system of twice the size.
    Descend {
        system: PathBuf,
        /// Constant matrix `chi` with `chi * conj(chi) = I`.
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// Realize target monodromy by a Fuchsian system and descend it.
    Realize { targets: PathBuf },
    /// `realize`, then reload the rendered systems and re-verify them independently.
    Pipeline { targets: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Monodromy { .. } => "monodromy",
            Command::ConjugateCheck { .. } => "conjugate-check",
            Command::Gauge { .. } => "gauge",
            Command::Descend { .. } => "descend",
            Command::Realize { .. } => "realize",
            Command::Pipeline { .. } => "pipeline",
        }
    }
}

/// Validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub continuation: ContinuationOptions,
    pub tol_newton: f64,
    pub max_iter: usize,
    pub mode: Mode,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(a: &ConfigArgs) -> Result<Self, CliError> {
        let continuation = ContinuationOptions {
            order: a.order,
            step_fraction: a.step_fraction,
            tol_mono: a.tol_mono,
        };
        continuation.validate()?;
        if !(a.tol > 0.0) {
            return Err(CliError::Usage("--tol must be positive".into()));
        }
        if a.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        Ok(RunConfig {
            continuation,
            tol_newton: a.tol,
            max_iter: a.max_iter,
            mode: match a.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            },
            seed: a.seed,
            output: a.output.clone(),
        })
    }

    pub fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            refine: RefineOptions {
                tol: self.tol_newton,
                max_iter: self.max_iter,
                continuation: self.continuation,
            },
            digits: RENDER_DIGITS,
        }
    }
}

/// Run a parsed command line and return what goes to stdout: one header
/// line carrying the timestamp, then the deterministic report body.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let config = RunConfig::from_args(&cli.config)?;
    if let Some(j) = cli.config.jobs {
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let body = commands::execute(&cli.command, &config)?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(format!("# pvd {} at unix time {stamp}\n{body}", cli.command.name()))
}
