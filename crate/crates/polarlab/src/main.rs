use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polarlab::plot::{plot_data, Series};
use polarlab::{run_file, LabError, RunOptions};

/// Exact polar-code experiments.
#[derive(Parser)]
#[command(version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; 1 is the reference mode.
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Writes a plot-ready series from an earlier output.
    Plot {
        #[arg(long, value_enum)]
        series: Series,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Command::Plot { series, input, out }) => {
            plot_data(series, &input).and_then(|t| t.write(&out).map(|()| vec![out]))
        }
        None => match cli.config {
            Some(config) => run_file(
                &config,
                &RunOptions {
                    out: cli.out,
                    threads: cli.threads,
                    seed: cli.seed,
                },
            ),
            None => Err(LabError::Config("--config is required".into())),
        },
    };
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
