//! Command-line front end for `srq-core`: JSON instance and report formats,
//! the built-in example table, a random-instance benchmark with CSV output,
//! and a JSON-lines trace of the saw-tooth bounds.

pub mod bench;
pub mod cli;
pub mod error;
pub mod examples;
pub mod format;
pub mod pipeline;
pub mod trace;

pub use error::{CliError, Result};
