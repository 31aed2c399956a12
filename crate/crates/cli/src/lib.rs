//! File formats, run reports and subcommands for the `qbm` tool.

pub mod commands;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod report;

pub use error::CliError;
pub use report::RunReport;
