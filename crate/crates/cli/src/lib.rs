//! Batch front-end for the duality verification suites: configuration,
//! suite selection, and JSON/CSV reports.

pub mod catalog;
pub mod config;
pub mod record;
pub mod run;
pub mod suites;

pub use config::{Cli, Command, Format, Options, RunConfig, UsageError};
pub use record::Record;
pub use run::{exit_status, run, Outcome};
