//! Configuration parsing and CSV rendering behind the `csgreen` binary.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;

pub use commands::Report;
pub use config::{parse_config, RunConfig, SweepSpec};
pub use error::CliError;
