//! Command-line front end for the imaging toolkit: scene files, echo and
//! image serialization, the subcommand pipeline, and graymap export.
//!
//! The `rcf` binary is a thin wrapper over [`commands`]; everything it does
//! is callable from here, which is how the integration tests drive it.

pub mod commands;
pub mod error;
pub mod export;
pub mod formats;
pub mod manifest;
pub mod scene;

pub use error::CliError;
