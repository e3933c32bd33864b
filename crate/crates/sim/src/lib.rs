//! Experiment harness for online unconstrained submodular maximization:
//! configuration, seeded multi-trial runs, offline comparisons, graph
//! files, and CSV/JSON output.

pub mod config;
pub mod descriptor;
pub mod error;
pub mod experiment;
pub mod graph_file;
pub mod output;

pub use config::{parse_config, ExperimentConfig, Format, Game};
pub use error::SimError;
pub use experiment::{run_experiment, run_offline, run_verify, Report, ResultRow, Summary};
