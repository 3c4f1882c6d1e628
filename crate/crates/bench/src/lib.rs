//! Experiment plumbing behind the `fairkc` command.

pub mod experiment;
pub mod records;
