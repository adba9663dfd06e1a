//! Command driver for `fracres`: configuration parsing, dispatch and
//! CSV/text emission. The binary in `main.rs` is a thin wrapper over [`run`].

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

pub use commands::{run_command, Command, Outcome};
pub use config::{parse_config, ConfigError, RunConfig};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    HypothesesFailed = 2,
    NotConverged = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] fracres_core::Error),
    #[error("{0}")]
    Usage(String),
}

/// Loads `config`, runs `command` and writes its files into `out` (or the
/// configured directory). Nothing is written unless the run gets past
/// validation.
pub fn run(command: Command, config: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(config).map_err(|source| CliError::Read {
        path: config.to_path_buf(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(dir) = out {
        cfg.output.dir = dir.to_path_buf();
    }
    let outcome = run_command(command, &cfg)?;
    output::write_all(&cfg.output.dir, &outcome.files)?;
    Ok(outcome)
}
