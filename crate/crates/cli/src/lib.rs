//! Batch front end for `polydisk`: config-driven checks, matrix dumps,
//! kernel reports, parameter sweeps and the verification battery.

pub mod config;
pub mod defaults;
pub mod report;
pub mod run;
pub mod verify;

use thiserror::Error;

/// Failures that stop a run before any verdict exists. All map to exit 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] polydisk::Error),
    #[error("{0}")]
    Io(String),
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
