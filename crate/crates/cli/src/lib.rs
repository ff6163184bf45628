//! Command-line front end: TOML configuration, the five subcommands and
//! their CSV/JSON reports.

pub mod commands;
pub mod config;
pub mod report;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}

pub use commands::{
    asymptotics, oracle_compare, scan, solve, verify, AsymptoticsOptions, CommandError, Outcome,
    ScanOptions, SolveOptions,
};
pub use config::{load_config, parse_config, ConfigError, RunConfig};
pub use report::{format_number, Check, Report, Status, Table};
