//! IO, configuration and the experiment runner behind the `dqc1` binary.

pub mod config;
pub mod error;
pub mod matrix_io;
pub mod results;
pub mod runner;
pub mod spec;

pub use config::{load_config, parse_config, Experiment, ExperimentConfig, Format};
pub use error::{CliError, Result};
pub use results::{read_results, write_results, ResultRow};
pub use runner::{run_experiment, verify_rows};
