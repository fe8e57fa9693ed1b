//! Experiment runner: declarative configs in, CSV/JSON/SVG artifacts out.

pub mod config;
pub mod convergence;
pub mod experiment;
pub mod output;

pub use config::{preset, ExperimentConfig, Mode, PRESETS};
pub use convergence::{convergence_report, ConvergenceReport};
pub use experiment::{execute, run, write_artifacts, Check, Report};
