//! Experiment harness for character sums over Bohr sets: configuration,
//! seeded sampling, sweeps, invariant suites and report emission.

pub mod commands;
pub mod config;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod sample;
pub mod suites;
pub mod sweep;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Math(#[from] bohrsum::Error),
}

impl HarnessError {
    /// 2 for usage and configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 1,
        }
    }
}
