//! Experiment driver for the MU-MIMO downlink simulator: config parsing,
//! sweep execution and CSV/plot artifact output.

pub mod config;
pub mod sweep;

pub use config::{parse_config_file, RunSettings, SweepSpec};
pub use sweep::{run_sweep, write_geometry_csv, SweepOutcome, AGGREGATE_HEADER, DETAIL_HEADER};
