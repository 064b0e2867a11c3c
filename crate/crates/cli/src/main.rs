//! `levy-iou`: runs an experiment and writes its CSV files.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use levy_iou::experiments::{run, write_outputs, Command, ExperimentConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Subcommand {
    SamplePaths,
    M1Sweep,
    TightnessProbe,
    Fpt,
    CfCheck,
    DecomposeDemo,
}

impl From<Subcommand> for Command {
    fn from(s: Subcommand) -> Self {
        match s {
            Subcommand::SamplePaths => Command::SamplePaths,
            Subcommand::M1Sweep => Command::M1Sweep,
            Subcommand::TightnessProbe => Command::TightnessProbe,
            Subcommand::Fpt => Command::Fpt,
            Subcommand::CfCheck => Command::CfCheck,
            Subcommand::DecomposeDemo => Command::DecomposeDemo,
        }
    }
}

/// Simulation experiments for Lévy-driven Langevin dynamics.
#[derive(Debug, Parser)]
#[command(name = "levy-iou", version)]
struct Cli {
    #[arg(value_enum)]
    command: Subcommand,

    /// `key=value` configuration file, or any CSV written by this tool.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Overrides the `seed` of the configuration.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let command = Command::from(cli.command);
    let files = run(command, &cfg, cli.workers).with_context(|| format!("{command} failed"))?;
    write_outputs(&cli.out, &files)?;
    for f in &files {
        println!("{}", cli.out.join(&f.name).display());
    }
    Ok(())
}
