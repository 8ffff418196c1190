//! Config-driven experiment runner behind the `wsnids` binary.

mod config;
mod run;

pub use config::{DatasetConfig, ExperimentConfig, ModelConfig};
pub use run::{emit_report, run_experiment, run_suite, RunOutput, SuiteOutput, SuiteRow};
