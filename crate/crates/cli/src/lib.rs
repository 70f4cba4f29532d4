//! Command-line front end for `rball-core`.
//!
//! Geometry is exchanged as JSON ([`files`]); verification suites write
//! line-delimited JSON and a CSV summary; searches write a JSON record and
//! optionally an SVG picture ([`svg`]).

mod commands;
pub mod files;
pub mod svg;

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub use commands::run;

/// Exit code for a clean run.
pub const EXIT_OK: i32 = 0;
/// Exit code when a verification suite records violations.
pub const EXIT_VIOLATIONS: i32 = 1;
/// Exit code for usage, input, and every other error.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] rball_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Stable machine-readable error kind.
    pub fn kind(&self) -> &'static str {
        use rball_core::Error as E;
        match self {
            Self::Usage(_) => "usage",
            Self::Input(_) => "input",
            Self::Core(E::Domain(_)) => "domain",
            Self::Core(E::Infeasible(_)) => "infeasible",
            Self::Core(E::NoConvergence(_)) => "no_convergence",
            Self::Core(E::IllConditioned(_)) => "ill_conditioned",
            Self::Io(_) => "io",
        }
    }

    /// One-line JSON record for standard error.
    pub fn record(&self) -> String {
        error_record(self.kind(), &self.to_string())
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: &'a str,
}

pub(crate) fn error_record(kind: &str, message: &str) -> String {
    serde_json::to_string(&ErrorRecord { error: kind, message }).expect("string fields serialize")
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes to `path` when given, else to standard output.
pub(crate) fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
