//! Library side of the `fracvar` binary: configuration, custom problem
//! expressions, and the `solve`, `verify` and `convergence` runs.

pub mod config;
pub mod custom;
pub mod run;

mod error;

pub use error::CliError;
