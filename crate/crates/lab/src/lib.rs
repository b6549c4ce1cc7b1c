//! Experiment harness for `charsum-core`: set and sweep configuration,
//! CSV/JSON output, and the functions behind the `charsum-lab` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod setspec;

pub use config::{ExperimentConfig, FamilySpec};
pub use error::{LabError, Result};
pub use experiment::{run_experiment, sweep_and_emit, ExperimentOutcome, ReportRow};
