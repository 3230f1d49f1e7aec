//! Library surface of the `diverge` binary: spec-string parsing, the CSV
//! dialect, and the subcommand implementations. Kept as a lib so tests can
//! drive the same readers the tool uses.

pub mod commands;
pub mod csvio;
pub mod parse;
