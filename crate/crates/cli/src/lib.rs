//! Config-driven experiment runner for `ness-core`.
//!
//! A config file lists experiments (see [`config`]); each builds a model
//! from a preset (see [`presets`]), evaluates one identity, and emits CSV
//! tables whose `#` header names the identity, the model, the seed, the
//! contract and its result. Outputs depend only on the config, not on the
//! number of worker threads.
//!
//! Exit codes: 0 all contracts hold, 1 a contract failed, 2 malformed
//! config, 3 unknown preset, 4 invalid grid, 5 size limit, 6 I/O error.

pub mod config;
pub mod experiments;
pub mod presets;

use std::path::{Path, PathBuf};

pub use config::{parse, validate, Config, Diagnostic, DiagnosticKind, ExperimentConfig, Kind};
pub use experiments::{run_experiment, Outcome, RunError};

/// Environment variable naming the default output directory.
pub const OUTPUT_ENV: &str = "NESS_LAB_OUT";

/// Output directory: explicit flag, then the config's `output`, then
/// `$NESS_LAB_OUT`, then `ness-lab-out`.
pub fn output_dir(flag: Option<&Path>, config: &Config) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| config.output.clone())
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("ness-lab-out"))
}

/// Writes the tables of one outcome into `dir`.
pub fn write_outcome(outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    for (file, table) in &outcome.tables {
        let path = dir.join(file);
        std::fs::write(&path, table.render()).map_err(|source| RunError::Io { path: path.clone(), source })?;
        written.push(path);
    }
    Ok(written)
}
