//! Experiment driver for the `mannheim` command-line tool.
//!
//! A run resolves an [`ExperimentConfig`] from a JSON file and flags, executes
//! one pipeline and writes its CSV/JSON/SVG artifacts together with a
//! `manifest.json` listing every file with its size and SHA-256.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;

pub use config::{Args, Command, ExperimentConfig, Format};
pub use run::{execute, manifest, run, Artifact, Execution, Manifest, RunOutcome, SweepResult, SweepRow};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Pipeline(#[from] mannheim_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Exit statuses of the binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PIPELINE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const VERIFY_FAILED: i32 = 3;
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => exit::USAGE,
            RunError::Pipeline(_) | RunError::Io(_) => exit::PIPELINE,
        }
    }
}
