//! Host side of the simulator: configuration files, array dumps, netlist
//! listings, PGM images and report formatting. The `slim` binary is a thin
//! command-line layer over these modules and `slim-core`.

pub mod config;
pub mod dump;
pub mod listing;
pub mod pgm;
pub mod report;

pub use config::Config;
