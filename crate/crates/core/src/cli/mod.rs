//! Operator commands: fixture generation, benchmark runs, reports and
//! fixture validation. The `viplan` binary is a thin argument layer over these.

mod config;
mod generate;
mod report;
mod run;
mod validate;

pub use config::{AgentSpec, RunConfig};
pub use generate::{cmd_generate, derive_seed};
pub use report::{cmd_report, ReportOutput};
pub use run::{cmd_run, load_tasks, RunSummary, TaskSpec, SUMMARY_FILE};
pub use validate::{cmd_validate, ValidationEntry, ValidationReport};

use std::path::Path;

/// Exit codes: 1 usage, 2 infrastructure, 3 validation failure.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Infra(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Infra(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Infra(format!("{}: {e}", path.display()))
    }
}

pub(crate) fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
