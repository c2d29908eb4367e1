//! Library behind the `kdv` binary: argument surface, sessions, command
//! dispatch and output formats.

pub mod cli;
pub mod commands;
pub mod config;
pub mod emit;
pub mod error;

pub use commands::{execute, parse_expr, run};
pub use error::{CliError, ExitCode};
