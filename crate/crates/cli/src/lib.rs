pub mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

/// Errors that abort a run before a report exists; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Hyper(#[from] zonal_core::hyperint::HyperError),
    #[error(transparent)]
    Cycle(#[from] zonal_core::cycles::CycleError),
    #[error(transparent)]
    Braid(#[from] zonal_core::braiding::BraidError),
    #[error(transparent)]
    Rep(#[from] zonal_core::repcore::RepError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
