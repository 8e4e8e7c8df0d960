#![allow(dead_code)]

// Shared with the CLI, which checks its output against the same tables.
#[path = "../../../tiledag-cli/src/golden.rs"]
pub mod golden;
