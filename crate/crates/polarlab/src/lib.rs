//! Files, configs and the experiment runner around `polarlab-core`.
//!
//! - [`spec`]: JSON channel specs, validated on load.
//! - [`config`]: TOML experiment configs.
//! - [`table`]: CSV output with `#` header lines.
//! - [`run`]: dispatch of each experiment kind.
//! - [`plot`]: plot-ready series from run outputs.

pub mod config;
pub mod error;
pub mod plot;
pub mod run;
pub mod spec;
pub mod table;

pub use config::ExperimentConfig;
pub use error::{LabError, Result};
pub use run::{run, run_file, RunOptions};
