//! Scenario configs, sweeps and dataset output for the command-line tool.

pub mod config;
pub mod output;
pub mod scenario;

pub use config::{BellSelection, ConfigError, ScenarioConfig, Sweep};
pub use scenario::{count_local_maxima, run_scenario, sample_std, Dataset, ResultRow, COLUMNS};
