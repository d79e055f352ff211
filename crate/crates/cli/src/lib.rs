//! Library surface of the command line front end: configuration, snapshot
//! format, plotting and the subcommand implementations.

pub mod commands;
pub mod config;
pub mod error;
pub mod plot;
pub mod snapshot;
