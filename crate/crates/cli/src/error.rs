use std::fmt;
use std::path::PathBuf;

use srsp_core::DiagnosticsRecord;

use crate::config::ConfigError;
use crate::snapshot::SnapshotError;

/// Top-level failure of a subcommand. Every variant maps to a stable category
/// that the binary prints as a single-line `error[<category>]: ...` prefix.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(ConfigError),
    Io { path: PathBuf, source: std::io::Error },
    Snapshot(SnapshotError),
    BlowUp { record: DiagnosticsRecord, guard: f64 },
    NonFinite { record: DiagnosticsRecord },
    Verify(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Snapshot(_) => "snapshot",
            CliError::BlowUp { .. } => "blowup",
            CliError::NonFinite { .. } => "numeric",
            CliError::Verify(_) => "verify",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Extra lines printed after the one-line error prefix.
    pub fn detail(&self) -> Option<String> {
        match self {
            CliError::BlowUp { record, .. } | CliError::NonFinite { record } => Some(format!(
                "final record:\n{}\n{}",
                DiagnosticsRecord::CSV_HEADER,
                record.csv_row()
            )),
            _ => None,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Snapshot(e) => write!(f, "{e}"),
            CliError::BlowUp { record, guard } => write!(
                f,
                "blow-up guard tripped at t = {}: h1 = {:e} exceeds guard {:e}",
                record.t, record.h1, guard
            ),
            CliError::NonFinite { record } => {
                write!(f, "non-finite diagnostics at t = {}", record.t)
            }
            CliError::Verify(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<SnapshotError> for CliError {
    fn from(e: SnapshotError) -> Self {
        CliError::Snapshot(e)
    }
}
