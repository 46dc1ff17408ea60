use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ofdma_sra::experiments::{run_scenario, write_outputs, ScenarioConfig, Scheme};
use ofdma_sra::Error;

#[derive(Parser)]
#[command(name = "ofdma-sim", version, about = "Monte-Carlo OFDMA scheduling scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a TOML config.
    Run {
        config: PathBuf,
        /// Output directory for trials.csv, summary.csv and manifest.json.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Root seed, overriding `run.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated schemes, overriding `run.schemes`.
        #[arg(long)]
        schemes: Option<String>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } => 2,
        Error::Io { .. } | Error::Csv(_) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let Command::Run {
        config,
        out,
        seed,
        schemes,
        threads,
    } = cli.command;
    let mut cfg = ScenarioConfig::load(&config)?;
    if let Some(seed) = seed {
        cfg.run.seed = seed;
    }
    if let Some(list) = schemes {
        cfg.run.schemes = Scheme::parse_list(&list)?;
    }
    if threads == Some(0) {
        return Err(Error::Config {
            path: "--threads".into(),
            message: "must be at least 1".into(),
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("thread pool");
    let output = pool.install(|| run_scenario(&cfg))?;
    write_outputs(&output, &out)?;
    for row in &output.summary {
        println!(
            "{}={:<8} {:<13} goodput/subch {:.4} ± {:.4}",
            row.sweep_var, row.sweep_value, row.scheme, row.goodput_mean, row.goodput_stderr
        );
    }
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
