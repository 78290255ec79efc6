//! Library side of the `saddlegap` command-line tool: the problem file
//! format, report documents and the subcommands.

pub mod commands;
pub mod problem_file;
pub mod report;

pub use commands::{CliError, ExitStatus, Outcome};
