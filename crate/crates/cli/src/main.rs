use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rcbandit_cli::commands::{cmd_audit, cmd_oracle, cmd_plot, cmd_run, AuditOptions, RunOptions};
use rcbandit_cli::CliError;

#[derive(Parser)]
#[command(name = "rcbandit", version, about = "Bandits with censored resource consumption")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write traces, aggregate curves and a summary.
    Run {
        config: PathBuf,
        /// Override the number of repetitions.
        #[arg(long)]
        reps: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write each repetition's final estimator state.
        #[arg(long)]
        dump_state: bool,
    },
    /// Compute the value table, optimum and gaps of the configured instance.
    Oracle {
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Empirical tail audit of the censored estimator.
    Audit {
        config: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1000)]
        t: u64,
        #[arg(long, default_value_t = 10_000)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 1-based arm index.
        #[arg(long, default_value_t = 1)]
        arm: usize,
        /// Grid point to audit (default: the largest).
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Render an aggregate CSV as an SVG line plot.
    Plot { aggregate: PathBuf, out: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Run {
            config,
            reps,
            seed,
            out_dir,
            dump_state,
        } => {
            let opts = RunOptions {
                reps,
                seed,
                out_dir,
                dump_state,
                ..Default::default()
            };
            cmd_run(&config, &opts, &mut out).map(drop)
        }
        Command::Oracle { config, out_dir } => cmd_oracle(&config, out_dir.as_deref(), &mut out).map(drop),
        Command::Audit {
            config,
            alpha,
            t,
            runs,
            seed,
            arm,
            tau,
        } => {
            let opts = AuditOptions {
                alpha,
                t,
                runs,
                seed,
                arm,
                tau,
            };
            cmd_audit(&config, &opts, &mut out).map(drop)
        }
        Command::Plot { aggregate, out } => cmd_plot(&aggregate, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
