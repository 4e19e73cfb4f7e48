use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use influence_dyn::experiment::{format_real, run_config_files, ExperimentConfig, ExperimentError, Mode};
use influence_dyn::netgen::generate_random_network;

#[derive(Debug, Parser)]
#[command(name = "influence-dyn", version, about = "Opinion dynamics and social power experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one or more experiment configs and write CSV results.
    Run {
        /// JSON config file; repeat to run several, each into its own subdirectory.
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Overrides the seed of a random network.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of config files to run concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check that a config resolves to a valid instance.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print a seeded random interaction matrix as CSV.
    GenNetwork {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
    },
}

fn exit_code(err: &ExperimentError) -> ExitCode {
    if err.is_config() {
        ExitCode::from(2)
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("INFLUENCE_DYN_LOG", "error")).init();
    match Cli::parse().command {
        Command::Run { config, out, mode, seed, jobs } => {
            let mut status = ExitCode::SUCCESS;
            for (path, result) in config.iter().zip(run_config_files(&config, &out, mode, seed, jobs)) {
                match result {
                    Ok(files) => {
                        for f in files {
                            println!("{}", f.display());
                        }
                    }
                    Err(err) => {
                        eprintln!("error: {}: {err}", path.display());
                        status = exit_code(&err);
                    }
                }
            }
            status
        }
        Command::Validate { config } => match ExperimentConfig::from_file(&config).and_then(|c| c.resolve()) {
            Ok(instance) => {
                println!(
                    "ok: {} agents, regime {}, mode {}",
                    instance.interaction.n(),
                    instance.schedule.regime().name(),
                    instance.config.run.mode.name()
                );
                ExitCode::SUCCESS
            }
            Err(err) => {
                eprintln!("error: {err}");
                exit_code(&err)
            }
        },
        Command::GenNetwork { n, density, seed } => match generate_random_network(n, density, seed) {
            Ok(p) => {
                let header: Vec<String> = (1..=n).map(|j| format!("agent_{j}")).collect();
                println!("row,{}", header.join(","));
                for (i, row) in p.entries().rows().into_iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(|&v| format_real(v)).collect();
                    println!("{},{}", i + 1, cells.join(","));
                }
                ExitCode::SUCCESS
            }
            Err(err) => {
                eprintln!("error: {err}");
                ExitCode::from(2)
            }
        },
    }
}
