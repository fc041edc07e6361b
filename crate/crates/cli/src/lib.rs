//! Command-line front end: file formats, reports and the `qperceptron`
//! subcommands.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod model_file;
pub mod report;

pub use commands::{run, Cli, Command};
pub use error::{CliError, EXIT_INPUT, EXIT_NUMERICAL, EXIT_VERIFY_FAILED};
