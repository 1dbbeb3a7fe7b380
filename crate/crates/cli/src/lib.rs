//! Command-line front end for the linear-optics simulator: named schemes,
//! circuit files, GHZ sweeps, source statistics and intermediate planes.

pub mod circuit_file;
pub mod commands;
pub mod report;
