//! Command-line front end for the `glstar` library: JSON star
//! configurations, verification reports, exports and parallel queries.
//!
//! Every subcommand is a plain function returning its output text and exit
//! code, so the binary only parses arguments and writes the result.

pub mod commands;
pub mod config;

pub use commands::{
    cmd_construct, cmd_parallel, cmd_verify, demo_config, hfd_csv, lines_csv, mesh_obj, Outcome, VerifyOptions,
    CHECK_NAMES, EXIT_BUILD_FAILED, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_QUERY_FAILED,
};
pub use config::{parse_config, ConfigError, ConfigFailure, Family, StarConfig, Violation};

// The guide's chapter on the tool is compiled and run as doctests here.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}
