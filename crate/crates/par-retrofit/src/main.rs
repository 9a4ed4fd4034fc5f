use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use par_retrofit::commands::{self, GRAD_TOLERANCE};
use par_retrofit::config::RunConfig;
use par_retrofit::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "par",
    version,
    about = "Paraphrase-aware retrofitting of contextual embedders"
)]
struct Cli {
    /// Run configuration file (key = value lines).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory for artifacts.
    #[arg(long, global = true, value_name = "DIR", default_value = "par-out")]
    out: PathBuf,

    /// Master seed; overrides the seed in the config file.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Learn a transform; writes matrix, epoch report, resolved config.
    Train,
    /// Per-word contextual distance report under a saved transform.
    Report {
        /// Transform matrix file; identity when omitted.
        #[arg(long, value_name = "PATH")]
        matrix: Option<PathBuf>,
    },
    /// Finite-difference audit of the analytic gradient.
    Gradcheck {
        /// Offset added to one analytic gradient entry (detector check).
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb: f64,
    },
    /// Sweep the gamma/lambda grid; writes per-cell results and winner.
    Gridsearch,
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config_path = cli
        .config
        .ok_or_else(|| Error::InvalidInput("--config is required".into()))?;
    let mut cfg = RunConfig::from_file(&config_path)?;
    if let Some(seed) = cli.seed {
        cfg = cfg.with_seed(seed);
    }
    match cli.cmd {
        Cmd::Train => {
            commands::cmd_train(&cfg, &cli.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Report { matrix } => {
            commands::cmd_report(&cfg, matrix.as_deref(), &cli.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gradcheck { perturb } => {
            let report = commands::cmd_gradcheck(&cfg, perturb)?;
            if report.max_rel_error <= GRAD_TOLERANCE {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Cmd::Gridsearch => {
            commands::cmd_gridsearch(&cfg, &cli.out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("par: {err}");
            ExitCode::FAILURE
        }
    }
}
