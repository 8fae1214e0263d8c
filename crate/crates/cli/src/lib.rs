//! Command-line front end: argument parsing, run records and table output.

pub mod args;
pub mod record;
pub mod run;
