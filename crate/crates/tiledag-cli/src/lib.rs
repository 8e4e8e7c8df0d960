//! Command-line front end of `tiledag`: subcommands that reproduce the
//! published tables as CSV, the file formats they use, the tables
//! themselves, and the acceptance checks.

pub mod acceptance;
pub mod cli;
pub mod commands;
pub mod golden;
pub mod output;

pub use cli::run;

/// Bad arguments that only show up after parsing; exits like a clap error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Exit status on success.
pub const EXIT_OK: i32 = 0;
/// A library contract was violated (bad dimensions, cyclic trace, ...).
pub const EXIT_MODULE: i32 = 1;
/// Bad flags or values.
pub const EXIT_USAGE: i32 = 2;
/// `--check` found cells that differ, or `ip-check` found violated rows.
pub const EXIT_MISMATCH: i32 = 3;
