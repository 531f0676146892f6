//! Library side of the `green` command-line tool.
//!
//! The binary is a thin wrapper; everything testable lives here.

pub mod commands;
pub mod ideal_file;
pub mod point;

pub use commands::{Cli, Command};
