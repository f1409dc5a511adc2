//! Command-line front end of the `optocool` toolkit: configuration files,
//! parameter sweeps, cross-method checks, figure data and plot scripts.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod methods;
pub mod output;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
