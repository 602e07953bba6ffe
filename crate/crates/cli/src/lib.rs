//! File formats, reports and subcommands behind the `bapsens` binary.

pub mod commands;
pub mod formats;
pub mod report;
pub mod suite;
