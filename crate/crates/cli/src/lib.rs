//! Command-line driver for `vinoslice-core`: experiment orchestration,
//! exponent fits and JSON/CSV reports.

pub mod args;
mod commands;
pub mod config;
pub mod fit;
pub mod report;

pub use commands::{execute, run};
