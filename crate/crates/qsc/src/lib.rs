//! Command-line front end and report formats for `qsc-core`.

pub mod cli;
pub mod config;
pub mod range;
pub mod report;
