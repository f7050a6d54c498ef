//! Command-line front end: reports, solution files, figures and the
//! `search`, `verify` and `bench` commands.

use std::path::PathBuf;

pub mod candidates;
pub mod commands;
pub mod fmt;
pub mod report;
pub mod solutions;
pub mod svg;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Search(#[from] planar_cc::search::SearchError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Manifest(String),
}
