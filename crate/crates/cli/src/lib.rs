//! Command implementations for the `dehn` binary.

pub mod atlas;
pub mod report;
