use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "pathspin",
    version,
    about = "Simulate single-particle path-spin state transfer",
    long_about = "Simulate state transfer through a path-spin entangled particle: enumerate \
                  every measurement branch, sample runs, sweep the average fidelity, check \
                  the closed forms, and inspect what an interceptor sees.\n\n\
                  Beta and delta are always derived from alpha and gamma."
)]
pub struct Cli {
    /// Output format [default: table; csv for sweep]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// JSON file of defaults; keys are flag names without dashes
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all 16 measurement branches with corrections and fidelities
    Enumerate(InputArgs),
    /// Sample protocol runs with a seeded generator
    Simulate(SimulateArgs),
    /// Average fidelity over an (alpha, gamma) grid
    Sweep(SweepArgs),
    /// Cross-check simulation against the closed forms on a 21x21 grid
    Verify(VerifyArgs),
    /// What an interceptor of particle 1 can learn
    Eve(EveArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// First beam splitter amplitude alpha in [0, 1]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    /// Input amplitude gamma in [0, 1]
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// Relative phase of the input's |1> amplitude, radians [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub phase: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Number of runs (at least 1)
    #[arg(long)]
    pub runs: Option<u64>,

    /// Generator seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    /// Report branch frequencies and mean fidelity instead of each run
    #[arg(long)]
    pub aggregate: bool,

    /// Include each run's transcript (JSON only)
    #[arg(long)]
    pub transcript: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    /// alpha^2 and gamma^2 evenly spaced
    Probability,
    /// alpha and gamma evenly spaced
    Amplitude,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Grid points along alpha (at least 2) [default: 21]
    #[arg(long)]
    pub alpha_steps: Option<usize>,

    /// Grid points along gamma (at least 2) [default: 21]
    #[arg(long)]
    pub gamma_steps: Option<usize>,

    /// Write here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Axis spacing [default: probability]
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,

    /// Also enumerate every grid point and fail on disagreement
    #[arg(long)]
    pub validate: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest accepted deviation [default: 1e-10]
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,

    /// Corrupt one correction-table entry, given as M2,MA,PATH,SPIN
    #[arg(long, hide = true, value_name = "M2,MA,PATH,SPIN")]
    pub inject_fault: Option<String>,
}

#[derive(Debug, Args)]
pub struct EveArgs {
    /// First beam splitter amplitude alpha in [0, 1]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    /// Input amplitude gamma [default: 0.7071067811865476]
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// Input phase, radians [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub phase: Option<f64>,

    /// Second input used to probe the premature-measurement leak [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub probe_gamma: Option<f64>,

    /// Phase of the probe input, radians [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub probe_phase: Option<f64>,
}
