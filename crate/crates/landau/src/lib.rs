//! Command-line front end: branch sweeps, disc spectra, certified
//! brackets, invariant suites and figure data, all as CSV.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod method;
pub mod oracles;
pub mod pool;
pub mod verify;

pub use cli::run;
pub use error::{CliError, CliResult};
