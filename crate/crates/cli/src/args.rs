use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "larmor-otto",
    version,
    about = "Spin-1/2 quantum Otto engine driven by a rotating magnetic field",
    long_about = "Spin-1/2 quantum Otto engine driven by a rotating magnetic field.\n\n\
        Frequencies are in GHz (1e9 rad/s), angles in radians, temperatures in kelvin \
        and energies in joules. With --units natural, hbar = k_B = 1 and frequency \
        flags are used unscaled."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one cycle and write a single CSV row.
    Cycle(CycleArgs),
    /// Run a grid of cycles over lambda, omega and alpha.
    Sweep(SweepArgs),
    /// Write a time-resolved trace of one adiabatic stroke.
    Stroke(StrokeArgs),
    /// Check every closed form against its numerical oracle on a random ensemble.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsMode {
    Si,
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Binding {
    Stage,
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    Compression,
    Expansion,
}

/// Physical parameters shared by cycle, sweep and stroke.
#[derive(Debug, Clone, Default, Args)]
pub struct PhysArgs {
    /// Field frequency of the hot isochore [default: 6]
    #[arg(long, allow_hyphen_values = true)]
    pub omega1_ghz: Option<f64>,
    /// Field frequency of the cold isochore [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub omega2_ghz: Option<f64>,
    /// Angular velocity of the rotating field [default: -6]
    #[arg(long, allow_hyphen_values = true)]
    pub omega_ghz: Option<f64>,
    /// Tilt of the field from the z axis [default: pi/4]
    #[arg(long, visible_alias = "alpha", allow_hyphen_values = true)]
    pub alpha_rad: Option<f64>,
    /// Hot bath temperature [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub th_k: Option<f64>,
    /// Cold bath temperature [default: 0.1]
    #[arg(long, allow_hyphen_values = true)]
    pub tc_k: Option<f64>,
    /// Stroke duration in Rabi periods
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Unit system [default: si]
    #[arg(long, value_enum)]
    pub units: Option<UnitsMode>,
    /// Which drive's Rabi frequency converts lambda to each stroke duration [default: stage]
    #[arg(long, value_enum)]
    pub lambda_binding: Option<Binding>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct IoArgs {
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file; flags given on the command line win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CycleArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    /// lambda axis as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_grid: Option<String>,
    /// omega axis in GHz as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub omega_grid: Option<String>,
    /// alpha axis as a comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_list: Option<String>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Recorded in the provenance header
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StrokeArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    /// Stroke to trace [default: compression]
    #[arg(long, value_enum)]
    pub stage: Option<Stage>,
    /// Number of uniform time samples [default: 401]
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Ensemble seed [default: 1729]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random parameter draws [default: 100]
    #[arg(long)]
    pub draws: Option<usize>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Perturb the closed forms so that validation must fail
    #[arg(long, hide = true)]
    pub inject_error: bool,
    #[command(flatten)]
    pub io: IoArgs,
}
