//! Batch driver for `qpath-core`: circuit files, EPR sampling runs,
//! path-integral experiments and the physical-limits table, with CSV/JSON
//! outputs and a reproducibility manifest for every run.

pub mod app;
pub mod circuit;
pub mod descriptor;
pub mod error;
pub mod output;

pub use app::{run, Cli, Command, Report};
pub use error::{CliError, Result};
