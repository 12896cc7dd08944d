//! Command-line orchestration for trendwave: CSV ingestion, configuration,
//! the per-period analysis pipeline, SVG output and verification suites.

pub mod config;
pub mod entropy;
pub mod error;
pub mod field;
pub mod ingest;
pub mod pipeline;
pub mod svg;
pub mod tables;
pub mod verify;

pub use error::{CliError, CliResult};
