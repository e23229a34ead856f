//! `mudr`: rate-region, pentagon, Monte Carlo validation and parameter
//! sweep artifacts for joint radar-communications receivers.
//!
//! Exit status: 0 success, 1 a Monte Carlo tolerance check failed, 2 usage
//! or input error, 3 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod svg;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<mudr_core::Error> for CliError {
    fn from(e: mudr_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub enum Outcome {
    Done,
    CheckFailed,
}

#[derive(Parser, Debug)]
#[command(name = "mudr", version, about = "Joint radar-communications rate bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rate-region curves (outer, sic, interpolated, waterfill, hull) as CSV and SVG.
    Region(RegionArgs),
    /// Two-user multiple-access pentagon as CSV and SVG.
    Pentagon(PentagonArgs),
    /// Monte Carlo check of an analytic approximation; exits 1 on tolerance failure.
    Validate(ValidateArgs),
    /// One region CSV per value of a scenario field plus a summary table.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, env = "MUDR_OUT", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ScenarioArgs {
    /// Scenario JSON file; the bundled example scenario when omitted.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Number of subband fractions on (1e-4, 1 - 1e-4).
    #[arg(long, default_value_t = mudr_core::waterfill::DEFAULT_ALPHA_POINTS)]
    pub alpha_points: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct PentagonArgs {
    /// SNR of user 1 in dB (unit noise).
    #[arg(long, allow_negative_numbers = true)]
    pub snr1_db: f64,
    /// SNR of user 2 in dB (unit noise).
    #[arg(long, allow_negative_numbers = true)]
    pub snr2_db: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Crb,
    Residual,
    Gamma,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Crb => "crb",
            Experiment::Residual => "residual",
            Experiment::Gamma => "gamma",
        }
    }
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum)]
    pub experiment: Experiment,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// RNG seed; 0 when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rescale radar power so the integrated SNR equals this value.
    #[arg(long)]
    pub isnr: Option<f64>,
    /// Set the process delay spread so that sigma_tau_proc * B equals this value.
    #[arg(long)]
    pub spread: Option<f64>,
    /// Samples per simulated pulse.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    /// Samples per 1/B.
    #[arg(long, default_value_t = 8)]
    pub oversample: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Scenario field to vary.
    #[arg(long)]
    pub vary: String,
    /// Comma-separated values for the field.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub values: Vec<f64>,
    #[arg(long, default_value_t = mudr_core::waterfill::DEFAULT_ALPHA_POINTS)]
    pub alpha_points: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Region(a) => commands::region(a),
        Command::Pentagon(a) => commands::pentagon(a),
        Command::Validate(a) => commands::validate(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("mudr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
