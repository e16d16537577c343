//! Subcommand implementations and run manifests for the `bibliorank` binary.

pub mod commands;
pub mod manifest;
