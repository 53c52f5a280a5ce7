//! Library side of the `focal` command: evidence files, the subcommands and
//! the engine benchmark.

pub mod bench;
pub mod commands;
pub mod error;
pub mod io;

pub use error::{CliError, Result};
