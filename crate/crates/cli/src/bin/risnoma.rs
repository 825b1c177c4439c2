use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use risnoma_cli::commands::{cmd_analytic, cmd_compare, cmd_fig, cmd_run};
use risnoma_cli::config::{load_config, RunConfig};
use risnoma_cli::presets::Preset;
use risnoma_cli::CliError;
use risnoma_core::montecarlo::Execution;

/// Average BLER of RIS-assisted cooperative NOMA short-packet links.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a configuration (and evaluate closed forms) into a CSV file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reproduce a figure sweep: fig2 .. fig7.
    Fig {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: PathBuf,
        /// Base system parameters; the preset's own settings take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare closed forms against simulation; exit 4 on any FAIL.
    Compare {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print closed-form results as CSV without simulating.
    Analytic {
        #[arg(long)]
        config: PathBuf,
    },
}

fn with_overrides(
    mut rc: RunConfig,
    trials: Option<u64>,
    seed: Option<u64>,
) -> Result<RunConfig, CliError> {
    if let Some(n) = trials {
        if n == 0 {
            return Err(CliError::Config("--trials must be >= 1".into()));
        }
        rc.trials = n;
    }
    if let Some(s) = seed {
        rc.seed = s;
    }
    Ok(rc)
}

fn execution() -> Result<Execution, CliError> {
    Execution::from_env().map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            trials,
            seed,
        } => {
            let rc = with_overrides(load_config(&config)?, trials, seed)?;
            let result = cmd_run(&rc, &out, execution()?)?;
            if !result.failed.is_empty() {
                for f in &result.failed {
                    eprintln!("skipped {f}");
                }
                return Err(CliError::Config(format!(
                    "{} sweep point(s) rejected",
                    result.failed.len()
                )));
            }
            Ok(())
        }
        Command::Fig {
            preset,
            out,
            config,
            trials,
            seed,
        } => {
            let preset: Preset = preset.parse()?;
            let base = match config {
                Some(path) => load_config(&path)?,
                None => RunConfig::default(),
            };
            let rc = with_overrides(base, trials, seed)?;
            for path in cmd_fig(preset, &rc.system, rc.trials, rc.seed, &out, execution()?)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Compare { config } => {
            let report = cmd_compare(&load_config(&config)?, execution()?)?;
            print!("{}", report.text);
            if report.all_pass {
                Ok(())
            } else {
                Err(CliError::ComparisonFailed)
            }
        }
        Command::Analytic { config } => {
            print!("{}", cmd_analytic(&load_config(&config)?)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("risnoma: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
