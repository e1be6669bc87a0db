//! Command-line driver for the delayed two-strain infection model: TOML
//! configuration, scenario runner, reports and property suites.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod export;
pub mod report;
pub mod run;
pub mod sweep;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, Result};
