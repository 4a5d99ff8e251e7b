//! Command-line driver, JSON formats and run configuration on top of
//! `dwbc-core`.

pub mod config;
pub mod json;
pub mod run;

pub use config::RunConfig;
pub use run::{run, Report, RunError};
