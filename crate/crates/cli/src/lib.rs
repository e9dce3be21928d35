//! Command-line runner for `anyonic-core`: configuration, presets and
//! export of correlation data.

pub mod commands;
pub mod config;
pub mod error;
pub mod export;
pub mod presets;

use std::path::{Path, PathBuf};

use anyonic_core::Parity;
use clap::{Args, Parser, Subcommand};

use config::{ConfigFile, Experiment, Format, Mode, Overrides, Transform};
use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "anyonic", version, about = "Correlations of particles with arbitrary exchange statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Exchange phase in radians or as a multiple of pi such as `3pi/4`;
    /// repeat for a sweep. Replaces the configured phases.
    #[arg(long = "phase", allow_hyphen_values = true)]
    pub phases: Vec<String>,
    /// Detection mask: none, odd, even or both.
    #[arg(long)]
    pub mask: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the configured transformation matrix.
    Unitary(Common),
    /// Correlations from the permutation sum (two_particle, n_particle or
    /// distinguishable modes).
    Correlate(Common),
    /// Coincidences of the entangled input through copies of the process.
    Simulate(Common),
    /// Build and verify the state-preparation circuit.
    Stategen {
        #[command(flatten)]
        common: Common,
        /// Register size, when no configuration supplies one.
        #[arg(long)]
        qudits: Option<usize>,
    },
    /// Draw synthetic detection counts from the exact distribution.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Similarity and total variation between two matrix files.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Additionally drop entries outside this mask.
        #[arg(long)]
        mask: Option<String>,
        /// Fail with status 4 if the similarity is lower.
        #[arg(long)]
        min_similarity: Option<f64>,
    },
    /// Run a shipped preset.
    Reproduce {
        /// fig3, fig4, beamsplitter-hom or qutrit-n3.
        preset: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Byte-compare the outputs with the golden files.
        #[arg(long)]
        check: bool,
        /// Golden directory; defaults to the one shipped for the preset.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

fn overrides(c: &Common) -> Overrides {
    Overrides {
        phases: c.phases.clone(),
        mask: c.mask.clone(),
        format: c.format,
        seed: c.seed,
        out_dir: c.out.clone(),
        ..Default::default()
    }
}

fn load(config: Option<&Path>) -> Result<(ConfigFile, PathBuf)> {
    match config {
        Some(p) => ConfigFile::load(p),
        None => Ok((ConfigFile::parse("")?, PathBuf::new())),
    }
}

fn correlation_default(t: Option<&Transform>) -> Mode {
    match t.map(|t| t.inputs.len()) {
        Some(2) => Mode::TwoParticle,
        _ => Mode::NParticle,
    }
}

fn require_mode(exp: &Experiment, allowed: &[Mode], command: &str) -> Result<()> {
    if allowed.contains(&exp.mode) {
        Ok(())
    } else {
        Err(CliError::config(
            "mode",
            format!("`{command}` does not run mode {}", exp.mode.as_str()),
        ))
    }
}

fn out_dir(exp: &Experiment, fallback: &str) -> PathBuf {
    exp.out_dir.clone().unwrap_or_else(|| PathBuf::from(fallback))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Unitary(c) => {
            let (file, base) = load(c.config.as_deref())?;
            let exp = Experiment::resolve(&file, &base, &overrides(&c), correlation_default)?;
            commands::run_unitary(&exp, &out_dir(&exp, "out"))?;
        }
        Command::Correlate(c) => {
            let (file, base) = load(c.config.as_deref())?;
            let exp = Experiment::resolve(&file, &base, &overrides(&c), correlation_default)?;
            require_mode(
                &exp,
                &[Mode::TwoParticle, Mode::NParticle, Mode::Distinguishable],
                "correlate",
            )?;
            commands::run_experiment(&exp, &out_dir(&exp, "out"))?;
        }
        Command::Simulate(c) => {
            let (file, base) = load(c.config.as_deref())?;
            let exp = Experiment::resolve(&file, &base, &overrides(&c), |_| Mode::EntangledSim)?;
            require_mode(&exp, &[Mode::EntangledSim], "simulate")?;
            commands::run_experiment(&exp, &out_dir(&exp, "out"))?;
        }
        Command::Stategen { common, qudits } => {
            let (file, base) = load(common.config.as_deref())?;
            let mut ov = overrides(&common);
            ov.qudits = qudits;
            let exp = Experiment::resolve(&file, &base, &ov, |_| Mode::Stategen)?;
            require_mode(&exp, &[Mode::Stategen], "stategen")?;
            commands::run_experiment(&exp, &out_dir(&exp, "out"))?;
        }
        Command::Sample { common, shots } => {
            let (file, base) = load(common.config.as_deref())?;
            let mut ov = overrides(&common);
            ov.shots = shots;
            let exp = Experiment::resolve(&file, &base, &ov, correlation_default)?;
            require_mode(
                &exp,
                &[Mode::TwoParticle, Mode::NParticle, Mode::Distinguishable, Mode::EntangledSim],
                "sample",
            )?;
            commands::run_sample(&exp, &out_dir(&exp, "out"))?;
        }
        Command::Compare {
            a,
            b,
            mask,
            min_similarity,
        } => {
            let mask = mask
                .map(|m| {
                    Parity::parse(&m).ok_or_else(|| {
                        CliError::config("--mask", format!("unknown mask `{m}`"))
                    })
                })
                .transpose()?;
            commands::run_compare(&a, &b, mask, min_similarity)?;
        }
        Command::Reproduce {
            preset,
            format,
            out,
            check,
            golden,
        } => {
            let p = presets::find(&preset)?;
            let file = ConfigFile::parse(p.config)?;
            let ov = Overrides {
                format,
                out_dir: out,
                ..Default::default()
            };
            let exp = Experiment::resolve(&file, Path::new(""), &ov, correlation_default)?;
            let dir = out_dir(&exp, &format!("out/{}", p.name));
            let files = commands::run_experiment(&exp, &dir)?;
            if check {
                let golden = golden.unwrap_or_else(|| presets::golden_dir(p.name));
                commands::check_golden(&dir, &golden, &files)?;
            }
        }
    }
    Ok(())
}
