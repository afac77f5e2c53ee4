//! Argument model and command implementations behind the `biblio` binary.

mod args;
mod commands;

pub use args::*;
pub use commands::{run, Failure};
