//! Library surface of the `rangeseek` binary: config schema, subcommand
//! bodies, and output writers, exposed so integration tests can drive them
//! without spawning processes.

pub mod commands;
pub mod config;
pub mod output;
