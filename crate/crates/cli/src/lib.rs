//! Configuration, orchestration and file output for the `qprot` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Overrides, RunConfig};
pub use error::{CliError, Result};
pub use run::{run, Command};
