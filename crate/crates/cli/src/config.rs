//! Experiment configuration: field and coin specs, TOML files and the
//! merge order defaults < file < flags.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_integer::Integer;
use qpwalk_core::number_theory::golden_ratio;
use qpwalk_core::{coins, make_coin, rotation_y, Unitary2, C64};
use qpwalk_core::noise::{NoiseDistribution, NoiseScale};
use qpwalk_core::TimeRule;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid field spec {0:?}: expected n/m, a real number, or \"golden\"")]
    Field(String),
    #[error("invalid coin spec {0:?}: {1}")]
    Coin(String, String),
    #[error("invalid value for {key}: {msg}")]
    Value { key: &'static str, msg: String },
    #[error("cannot read config {path}: {msg}")]
    File { path: PathBuf, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Evolve,
    RevivalScan,
    TraceCheck,
    Cf,
    NoiseSeries,
    GaugeCheck,
    AppendixTable,
    BlochTrace,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Evolve,
        Experiment::RevivalScan,
        Experiment::TraceCheck,
        Experiment::Cf,
        Experiment::NoiseSeries,
        Experiment::GaugeCheck,
        Experiment::AppendixTable,
        Experiment::BlochTrace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Evolve => "evolve",
            Experiment::RevivalScan => "revival-scan",
            Experiment::TraceCheck => "trace-check",
            Experiment::Cf => "cf",
            Experiment::NoiseSeries => "noise-series",
            Experiment::GaugeCheck => "gauge-check",
            Experiment::AppendixTable => "appendix-table",
            Experiment::BlochTrace => "bloch-trace",
        }
    }

    /// Experiments whose outcome is a pass/fail verdict.
    pub fn is_check(self) -> bool {
        matches!(self, Experiment::TraceCheck | Experiment::GaugeCheck | Experiment::AppendixTable)
    }
}

impl FromStr for Experiment {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ConfigError::Value { key: "experiment", msg: format!("unknown experiment {s:?}") })
    }
}

/// `Φ/(2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldSpec {
    Rational { n: i64, m: u64 },
    Real(f64),
    Golden,
}

impl FieldSpec {
    pub fn turns(&self) -> f64 {
        match *self {
            FieldSpec::Rational { n, m } => n as f64 / m as f64,
            FieldSpec::Real(x) => x,
            FieldSpec::Golden => golden_ratio(),
        }
    }

    /// `Φ` in radians.
    pub fn radians(&self) -> f64 {
        match *self {
            FieldSpec::Rational { n, m } => 2.0 * PI * n as f64 / m as f64,
            _ => 2.0 * PI * self.turns(),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "golden" {
            return Ok(FieldSpec::Golden);
        }
        if let Some((n, m)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| ConfigError::Field(s.into()))?;
            let m: u64 = m.trim().parse().map_err(|_| ConfigError::Field(s.into()))?;
            if m == 0 {
                return Err(ConfigError::Field(s.into()));
            }
            // Stored reduced so that m is the period of the rotation.
            let g = n.unsigned_abs().gcd(&m);
            return Ok(FieldSpec::Rational { n: n / g as i64, m: m / g });
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(FieldSpec::Real(x)),
            _ => Err(ConfigError::Field(s.into())),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational { n, m } => write!(f, "{n}/{m}"),
            FieldSpec::Real(x) => write!(f, "{x}"),
            FieldSpec::Golden => write!(f, "golden"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoinSpec {
    Hadamard,
    Identity,
    ISigmaY,
    NoRevival,
    /// `R_y(θ) = exp(iθσ_y)`.
    Ry(f64),
    Entries { a: C64, b: C64 },
}

impl CoinSpec {
    pub fn unitary(&self) -> Result<Unitary2, ConfigError> {
        Ok(match *self {
            CoinSpec::Hadamard => coins::hadamard(),
            CoinSpec::Identity => coins::identity(),
            CoinSpec::ISigmaY => coins::i_sigma_y(),
            CoinSpec::NoRevival => coins::no_revival(),
            CoinSpec::Ry(theta) => rotation_y(theta),
            CoinSpec::Entries { a, b } => make_coin(a, b).map_err(|e| ConfigError::Coin(self.to_string(), e.to_string()))?,
        })
    }
}

impl FromStr for CoinSpec {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |msg: &str| ConfigError::Coin(s.into(), msg.into());
        let spec = match s {
            "hadamard" => CoinSpec::Hadamard,
            "identity" => CoinSpec::Identity,
            "i-sigma-y" => CoinSpec::ISigmaY,
            "no-revival" => CoinSpec::NoRevival,
            _ => {
                if let Some(theta) = s.strip_prefix("ry:") {
                    let theta: f64 = theta.trim().parse().map_err(|_| bad("angle is not a number"))?;
                    CoinSpec::Ry(theta)
                } else {
                    let parts: Vec<f64> = s
                        .split(',')
                        .map(|p| p.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad("expected a name, ry:θ or a_re,a_im,b_re,b_im"))?;
                    let [ar, ai, br, bi] = parts[..] else {
                        return Err(bad("expected four components a_re,a_im,b_re,b_im"));
                    };
                    CoinSpec::Entries { a: C64::new(ar, ai), b: C64::new(br, bi) }
                }
            }
        };
        spec.unitary()?;
        Ok(spec)
    }
}

impl fmt::Display for CoinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinSpec::Hadamard => write!(f, "hadamard"),
            CoinSpec::Identity => write!(f, "identity"),
            CoinSpec::ISigmaY => write!(f, "i-sigma-y"),
            CoinSpec::NoRevival => write!(f, "no-revival"),
            CoinSpec::Ry(t) => write!(f, "ry:{t}"),
            CoinSpec::Entries { a, b } => write!(f, "{},{},{},{}", a.re, a.im, b.re, b.im),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn parse_format(s: &str) -> Result<Format, ConfigError> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(ConfigError::Value { key: "format", msg: format!("expected csv or json, got {s:?}") }),
    }
}

fn parse_model(s: &str) -> Result<TimeRule, ConfigError> {
    match s {
        "rx" => Ok(TimeRule::RxField),
        "gauged" => Ok(TimeRule::GaugedSz),
        _ => Err(ConfigError::Value { key: "model", msg: format!("expected rx or gauged, got {s:?}") }),
    }
}

fn parse_noise_scale(s: &str) -> Result<NoiseScale, ConfigError> {
    match s {
        "radians" => Ok(NoiseScale::Radians),
        "turns" => Ok(NoiseScale::Turns),
        _ => Err(ConfigError::Value { key: "noise_scale", msg: format!("expected radians or turns, got {s:?}") }),
    }
}

fn parse_noise_dist(s: &str) -> Result<NoiseDistribution, ConfigError> {
    match s {
        "symmetric" => Ok(NoiseDistribution::Symmetric),
        "positive" => Ok(NoiseDistribution::Positive),
        _ => Err(ConfigError::Value { key: "noise_dist", msg: format!("expected symmetric or positive, got {s:?}") }),
    }
}

pub fn model_name(r: TimeRule) -> &'static str {
    match r {
        TimeRule::RxField => "rx",
        TimeRule::GaugedSz => "gauged",
    }
}

pub fn noise_scale_name(s: NoiseScale) -> &'static str {
    match s {
        NoiseScale::Radians => "radians",
        NoiseScale::Turns => "turns",
    }
}

pub fn noise_dist_name(d: NoiseDistribution) -> &'static str {
    match d {
        NoiseDistribution::Symmetric => "symmetric",
        NoiseDistribution::Positive => "positive",
    }
}

/// Partial configuration: every key optional. Used for both the TOML file
/// and the command-line flags.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub experiment: Option<String>,
    pub field: Option<String>,
    pub coin: Option<String>,
    pub model: Option<String>,
    pub tmax: Option<u64>,
    pub every: Option<u64>,
    pub seed: Option<u64>,
    pub epsilon: Option<Vec<f64>>,
    pub ensemble: Option<usize>,
    pub noise_scale: Option<String>,
    pub noise_dist: Option<String>,
    pub ms: Option<Vec<u64>>,
    pub trials: Option<usize>,
    pub depth: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl Overrides {
    pub fn from_toml_file(path: &Path) -> Result<Self, ConfigError> {
        let err = |msg: String| ConfigError::File { path: path.to_path_buf(), msg };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        toml::from_str(&text).map_err(|e| err(e.to_string()))
    }

    /// `other` wins wherever it is set.
    pub fn overlay(mut self, other: Overrides) -> Overrides {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(experiment, field, coin, model, tmax, every, seed, epsilon, ensemble, noise_scale, noise_dist, ms, trials, depth, out, format);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub field: FieldSpec,
    pub coin: CoinSpec,
    pub model: TimeRule,
    pub t_max: u64,
    /// Row stride in `t` for time series.
    pub every: u64,
    pub seed: u64,
    pub epsilons: Vec<f64>,
    pub ensemble: usize,
    pub noise_scale: NoiseScale,
    pub noise_dist: NoiseDistribution,
    pub ms: Vec<u64>,
    pub trials: usize,
    pub depth: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    /// Defaults reproduce the corresponding figure or table.
    pub fn defaults(experiment: Experiment) -> Self {
        let mut c = ExperimentConfig {
            experiment,
            field: FieldSpec::Rational { n: 1, m: 155 },
            coin: CoinSpec::Hadamard,
            model: TimeRule::RxField,
            t_max: 310,
            every: 1,
            seed: 0,
            epsilons: vec![0.0],
            ensemble: 100,
            noise_scale: NoiseScale::Turns,
            noise_dist: NoiseDistribution::Symmetric,
            ms: vec![6, 8, 10, 12, 14, 16],
            trials: 20,
            depth: 40,
            out: None,
            format: Format::Csv,
        };
        match experiment {
            Experiment::Evolve | Experiment::RevivalScan => {}
            Experiment::TraceCheck => c.trials = 200,
            Experiment::Cf => c.field = FieldSpec::Golden,
            Experiment::NoiseSeries => {
                c.field = FieldSpec::Rational { n: 1, m: 100 };
                c.t_max = 200;
                c.epsilons = vec![1e-4, 5e-4, 1e-3];
            }
            Experiment::GaugeCheck => {
                c.field = FieldSpec::Rational { n: 1, m: 10 };
                c.t_max = 50;
            }
            Experiment::AppendixTable => c.ms = (3..=12).collect(),
            Experiment::BlochTrace => {
                c.field = FieldSpec::Golden;
                c.t_max = 1000;
            }
        }
        c
    }

    /// Builds a config from defaults for `experiment` (or the experiment
    /// named in `o`) with `o` applied on top.
    pub fn resolve(experiment: Option<Experiment>, o: &Overrides) -> Result<Self, ConfigError> {
        let experiment = match (experiment, &o.experiment) {
            (Some(e), _) => e,
            (None, Some(name)) => name.parse()?,
            (None, None) => {
                return Err(ConfigError::Value { key: "experiment", msg: "no experiment given".into() });
            }
        };
        let mut c = ExperimentConfig::defaults(experiment);
        if let Some(s) = &o.field {
            c.field = s.parse()?;
        }
        if let Some(s) = &o.coin {
            c.coin = s.parse()?;
        }
        if let Some(s) = &o.model {
            c.model = parse_model(s)?;
        }
        if let Some(v) = o.tmax {
            c.t_max = v;
        }
        if let Some(v) = o.every {
            c.every = v;
        }
        if let Some(v) = o.seed {
            c.seed = v;
        }
        if let Some(v) = &o.epsilon {
            c.epsilons = v.clone();
        }
        if let Some(v) = o.ensemble {
            c.ensemble = v;
        }
        if let Some(s) = &o.noise_scale {
            c.noise_scale = parse_noise_scale(s)?;
        }
        if let Some(s) = &o.noise_dist {
            c.noise_dist = parse_noise_dist(s)?;
        }
        if let Some(v) = &o.ms {
            c.ms = v.clone();
        }
        if let Some(v) = o.trials {
            c.trials = v;
        }
        if let Some(v) = o.depth {
            c.depth = v;
        }
        if let Some(p) = &o.out {
            c.out = Some(p.clone());
        }
        if let Some(s) = &o.format {
            c.format = parse_format(s)?;
        }
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key, msg: &str| Err(ConfigError::Value { key, msg: msg.into() });
        if self.every == 0 {
            return bad("every", "must be at least 1");
        }
        if self.ensemble == 0 {
            return bad("ensemble", "must be at least 1");
        }
        if self.trials == 0 {
            return bad("trials", "must be at least 1");
        }
        if self.depth == 0 {
            return bad("depth", "must be at least 1");
        }
        if self.ms.iter().any(|&m| m == 0) {
            return bad("ms", "periods must be positive");
        }
        if self.epsilons.is_empty() || self.epsilons.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return bad("epsilon", "need at least one finite value >= 0");
        }
        if self.experiment == Experiment::GaugeCheck && self.t_max == 0 {
            return bad("tmax", "must be at least 1");
        }
        Ok(())
    }

    /// `key = value` pairs echoing every setting, in a fixed order.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        vec![
            ("experiment", self.experiment.name().into()),
            ("field", self.field.to_string()),
            ("coin", self.coin.to_string()),
            ("model", model_name(self.model).into()),
            ("tmax", self.t_max.to_string()),
            ("every", self.every.to_string()),
            ("seed", self.seed.to_string()),
            ("epsilon", self.epsilons.iter().map(|e| format!("{e:e}")).collect::<Vec<_>>().join(",")),
            ("ensemble", self.ensemble.to_string()),
            ("noise_scale", noise_scale_name(self.noise_scale).into()),
            ("noise_dist", noise_dist_name(self.noise_dist).into()),
            ("ms", list(&self.ms)),
            ("trials", self.trials.to_string()),
            ("depth", self.depth.to_string()),
        ]
    }
}
