//! Command-line front end for `curvkit-core`: metric manifests, the four
//! subcommands and deterministic JSON reports.

pub mod commands;
pub mod error;
pub mod manifest;
pub mod report;
