//! Experiment harness, file formats and CLI plumbing on top of the
//! `pathzeta` library: reproducible Monte Carlo validation runs, CSV
//! import/export of paths and barcodes, and JSON manifests that tie every
//! emitted number back to (config, seed, grid point).

// negated comparisons like !(t > 0.0) are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod io;
pub mod summary;

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] pathzeta::Error),
    #[error("closed form failed at {at}: {source}")]
    Target {
        at: String,
        #[source]
        source: pathzeta::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
