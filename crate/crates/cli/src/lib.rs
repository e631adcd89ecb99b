//! Command-line experiment runner for the `delta-atom-core` library.
//!
//! A run is one JSON config, resolved against experiment-specific defaults,
//! turned into a [`ResultTable`] and written as CSV.

pub mod config;
pub mod error;
pub mod experiments;
pub mod table;

use std::path::{Path, PathBuf};

pub use config::{load_config, load_config_with, parse_config, Experiment, RunConfig, Unit};
pub use error::{CliError, Result};
pub use experiments::run_experiment;
pub use table::{Cell, ResultTable};

/// Loads the config, runs the experiment and writes the CSV. `out` takes
/// precedence over `output_path` in the config. Returns the written path.
pub fn execute(experiment: Experiment, config: &Path, out: Option<&Path>, overrides: &[String]) -> Result<PathBuf> {
    let mut overrides = overrides.to_vec();
    if let Some(out) = out {
        let out = out.to_str().ok_or_else(|| CliError::Validation("--out path is not UTF-8".into()))?;
        overrides.push(format!("output_path={}", serde_json::Value::String(out.into())));
    }
    let cfg = load_config_with(config, Some(experiment), &overrides)?;
    log::info!("running {} -> {}", cfg.experiment, cfg.output_path);
    let table = run_experiment(&cfg)?;
    let path = PathBuf::from(&cfg.output_path);
    table.write_atomic(&path)?;
    Ok(path)
}
