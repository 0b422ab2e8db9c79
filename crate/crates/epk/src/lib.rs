//! File formats and the command-line workbench on top of `epk-core`.

pub mod cli;
pub mod derivation;
pub mod format;

pub use cli::{run, run_seeded};
