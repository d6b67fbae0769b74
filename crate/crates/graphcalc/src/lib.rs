//! File formats, DOT output, seeded verification suites and the command
//! implementations behind the `graphcalc` binary.

pub mod commands;
pub mod dot;
pub mod error;
pub mod formats;
pub mod random;
pub mod suites;

pub use error::{CliError, Result};
