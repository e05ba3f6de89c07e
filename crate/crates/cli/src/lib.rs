//! Command-line front end: file formats, subcommands and report rendering.

pub mod commands;
pub mod error;
pub mod io;
pub mod output;

pub use commands::{run, Cli};
pub use error::CliError;
