//! Command-line surface: one subcommand per experiment, shared flags, and
//! the exit-code contract.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigError, Experiment, ExperimentConfig, Overrides};
use crate::experiments::run;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "qpwalk", version, about = "Quantum walks with a quasi-periodic coin")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Position distribution p(x, t) from |0, up>.
    Evolve(Flags),
    /// Revival deviations per period, or per convergent for irrational fields.
    RevivalScan(Flags),
    /// Trace formula against direct products of random matrices.
    TraceCheck(Flags),
    /// Continued-fraction expansion of the field.
    Cf(Flags),
    /// Return probability under per-step field noise.
    NoiseSeries(Flags),
    /// Gauge equivalence with the electric walk.
    GaugeCheck(Flags),
    /// Exactly solvable coins C = 1 and C = i sigma_y.
    AppendixTable(Flags),
    /// Bloch vector of the spinor at the origin.
    BlochTrace(Flags),
    /// Run the experiment named in a config file.
    Run(Flags),
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// TOML file with any of the flag names as keys; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Φ/(2π): n/m, a real number, or "golden".
    #[arg(long)]
    pub field: Option<String>,
    /// hadamard | identity | i-sigma-y | no-revival | ry:θ | a_re,a_im,b_re,b_im
    #[arg(long)]
    pub coin: Option<String>,
    /// rx (S·R_x(tΦ)·C) or gauged (C·e^{-iΦ(t-1)σ_z}·S).
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub tmax: Option<u64>,
    /// Emit every n-th time step (the last step is always emitted).
    #[arg(long)]
    pub every: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated noise strengths.
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Option<Vec<f64>>,
    #[arg(long)]
    pub ensemble: Option<usize>,
    /// radians or turns (ε in units of 2π).
    #[arg(long)]
    pub noise_scale: Option<String>,
    /// symmetric (x_t in [-1, 1]) or positive (x_t in [0, 1]).
    #[arg(long)]
    pub noise_dist: Option<String>,
    /// Comma-separated periods m.
    #[arg(long, value_delimiter = ',')]
    pub ms: Option<Vec<u64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            experiment: None,
            field: self.field.clone(),
            coin: self.coin.clone(),
            model: self.model.clone(),
            tmax: self.tmax,
            every: self.every,
            seed: self.seed,
            epsilon: self.epsilon.clone(),
            ensemble: self.ensemble,
            noise_scale: self.noise_scale.clone(),
            noise_dist: self.noise_dist.clone(),
            ms: self.ms.clone(),
            trials: self.trials,
            depth: self.depth,
            out: self.out.clone(),
            format: self.format.clone(),
        }
    }
}

impl Command {
    fn split(&self) -> (Option<Experiment>, &Flags) {
        match self {
            Command::Evolve(f) => (Some(Experiment::Evolve), f),
            Command::RevivalScan(f) => (Some(Experiment::RevivalScan), f),
            Command::TraceCheck(f) => (Some(Experiment::TraceCheck), f),
            Command::Cf(f) => (Some(Experiment::Cf), f),
            Command::NoiseSeries(f) => (Some(Experiment::NoiseSeries), f),
            Command::GaugeCheck(f) => (Some(Experiment::GaugeCheck), f),
            Command::AppendixTable(f) => (Some(Experiment::AppendixTable), f),
            Command::BlochTrace(f) => (Some(Experiment::BlochTrace), f),
            Command::Run(f) => (None, f),
        }
    }
}

pub fn resolve(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    let (experiment, flags) = cli.command.split();
    let file = match &flags.config {
        Some(p) => Overrides::from_toml_file(p)?,
        None => Overrides::default(),
    };
    if let (Some(e), Some(named)) = (experiment, &file.experiment) {
        if named != e.name() {
            return Err(ConfigError::Value {
                key: "experiment",
                msg: format!("config file is for {named:?}, not {:?}", e.name()),
            });
        }
    }
    ExperimentConfig::resolve(experiment, &file.overlay(flags.overrides()))
}

/// Runs a parsed command line, writing output and diagnostics.
pub fn main_with(cli: &Cli) -> ExitCode {
    let config = match resolve(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let record = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let text = record.render(config.format);
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        None => print!("{text}"),
    }
    match record.passed {
        Some(false) => {
            eprintln!("{}: check failed", config.experiment.name());
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        _ => ExitCode::from(EXIT_OK),
    }
}
