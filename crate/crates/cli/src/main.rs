use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use dqgan_cli::config::ExperimentConfig;
use dqgan_cli::experiment;

#[derive(Parser)]
#[command(name = "dqgan", about = "Dissipative quantum GAN experiment runner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model from a config file and write CSV artifacts.
    Run {
        /// Path to a key=value config file.
        config_path: PathBuf,
        /// Override a config key, e.g. --set seed=3. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Export Bloch coordinates of generated samples at a given epoch.
    Bloch {
        /// Path to a key=value config file.
        config_path: PathBuf,
        /// Epoch at which to sample the generator (0 = untrained).
        #[arg(long)]
        epoch: usize,
        /// Override a config key. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config_path,
            overrides,
        } => {
            let config = ExperimentConfig::load(&config_path, &overrides)?;
            experiment::run(&config)?;
        }
        Command::Bloch {
            config_path,
            epoch,
            overrides,
        } => {
            let config = ExperimentConfig::load(&config_path, &overrides)?;
            experiment::bloch(&config, epoch)?;
        }
    }
    Ok(())
}
