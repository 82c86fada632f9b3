//! Harness around `genlimit-core`: file formats, single runs, sweeps.

pub mod error;
pub mod formats;
pub mod run;
pub mod sweep;

pub use error::{HarnessError, Result, EXIT_CONFIG, EXIT_FAILURE, EXIT_PARTIAL};
