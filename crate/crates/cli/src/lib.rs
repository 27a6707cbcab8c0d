//! Command-line front end for `valring`: spec parsing and JSON reports.

pub mod commands;
pub mod parse;

pub use commands::{execute, Cli, Command, Options, Outcome};
pub use parse::{parse_field, parse_specs, parse_specs_with, SpecError, Specs};
