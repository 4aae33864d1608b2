//! Command-line companion to `cfs-core`: TOML run configurations, parallel
//! sweeps and CSV output.

pub mod config;
pub mod run;
pub mod table;
pub mod validate;
