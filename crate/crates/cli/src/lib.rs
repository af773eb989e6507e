//! Reproducible experiments on top of `qpwalk-core`: configuration,
//! runners and CSV/JSON output.

pub mod app;
pub mod config;
pub mod experiments;
pub mod record;

pub use config::{CoinSpec, ConfigError, Experiment, ExperimentConfig, FieldSpec, Format, Overrides};
pub use experiments::run;
pub use record::{Cell, ExperimentRecord};
