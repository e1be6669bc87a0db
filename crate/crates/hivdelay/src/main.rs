use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hivdelay::export::Format;
use hivdelay::run::{run, RunOptions};
use hivdelay::RunConfig;

/// Simulate and analyse the delayed two-strain infection model.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweeps (0 picks one per core).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Format of tabular artifacts.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = RunConfig::from_path(&args.config).and_then(|cfg| {
        run(
            &cfg,
            &RunOptions {
                out_dir: args.out,
                workers: args.workers,
                format: args.format,
            },
        )
    });
    match result {
        Ok(artifacts) => {
            for a in artifacts {
                println!("{}: {}", a.scenario, a.path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
