//! Experiment driver: configs, runs, CSV tables and JSON manifests.

pub mod config;
pub mod experiments;
pub mod report;
pub mod stats;

pub use config::{Experiment, ExperimentConfig, Grid};
pub use experiments::run;
pub use report::{Check, Report, RunManifest, Table};
pub use stats::Fitted;
