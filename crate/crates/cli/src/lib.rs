//! Report schema and worked-example registry behind the `fnc` binary.

pub mod examples;
pub mod report;
