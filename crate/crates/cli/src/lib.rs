//! File formats, result documents and the `leakaudit` command line around
//! [`leakaudit_core`].

pub mod cli;
pub mod document;
pub mod input;
pub mod plot;
pub mod validate;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] input::LoadError),
    #[error(transparent)]
    Document(#[from] document::DocumentError),
    #[error("{0}")]
    Engine(#[from] leakaudit_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("plot: {0}")]
    Plot(anyhow::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    /// 1 for bad input or configuration, 2 for internal numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) | CliError::Document(document::DocumentError::Serialize(_)) => 2,
            _ => 1,
        }
    }
}
