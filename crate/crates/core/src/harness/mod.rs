//! Convergence studies, verification suites and report output.

pub mod config;
pub mod study;
pub mod verify;
