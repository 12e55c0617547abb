//! Library side of the `tcorr` command-line tool: configuration parsing,
//! sweep evaluation, presets and verification suites.

pub mod chi;
pub mod config;
pub mod presets;
pub mod run;
pub mod verify;
