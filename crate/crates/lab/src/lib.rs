//! Experiment runner behind the `morrey-lab` binary.
//!
//! Each command reads one JSON config, runs a `morrey-core` operation and
//! writes a JSON report (plus CSV/SVG where it makes sense) into an output
//! directory. Reports embed the resolved config and the tool version, and
//! contain nothing that depends on the thread count or the seed.

// `!(x > 0.0)` is deliberate: NaN must fail validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod crosscheck;
pub mod output;

use std::path::PathBuf;

pub use commands::{run, Command, Outcome};

/// Version string embedded in every report.
pub const VERSION: &str = concat!("morrey-lab ", env!("CARGO_PKG_VERSION"));

/// Process exit code for a rejected config.
pub const EXIT_VALIDATION: i32 = 2;
/// Process exit code when divergence shows up where boundedness was expected.
pub const EXIT_DIVERGENCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    pub(crate) fn invalid(section: &str, e: impl std::fmt::Display) -> Self {
        LabError::Validation(format!("{section}: {e}"))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }

    /// Exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Validation(_) => EXIT_VALIDATION,
            LabError::Io { .. } => 1,
        }
    }
}
