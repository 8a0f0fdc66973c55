//! Front end of the `radshock` binary: configuration, commands and output.

pub mod commands;
pub mod config;
pub mod output;
