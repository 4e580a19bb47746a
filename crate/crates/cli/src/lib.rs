//! Command-line driver for `mbi-core`: configuration, subcommands and
//! report files.

pub mod commands;
pub mod config;
pub mod table;

pub use commands::{run, CliError};
pub use config::{Command, Overrides, RunConfig};
