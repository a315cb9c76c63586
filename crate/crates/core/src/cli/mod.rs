//! The `gwkit` command line: flag and config-file handling plus the
//! `bw`, `gwr` and `gwss` subcommands.

pub mod options;
pub mod run;

pub use options::{BandwidthMode, Cli, Command, CommandKind, RunArgs, RunConfig, SearchKind};
pub use run::run;
