//! Library side of the `cranklab` command: argument parsing, command
//! dispatch, output rendering and the on-disk cache.

pub mod cache;
mod commands;
pub mod output;

pub use commands::{
    run, Cli, CliError, Command, Outcome, CRANK_SERIES_LIMIT, EXACT_PCOUNT_LIMIT,
    RANK_ENUMERATION_LIMIT,
};
