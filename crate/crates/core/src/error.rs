use std::io;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: link {source_label} {source_time} -> {target_label} {target_time} cites a newer timestep")]
    Validation {
        line: usize,
        source_label: String,
        source_time: u64,
        target_label: String,
        target_time: u64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("modularity is undefined on a graph without edges")]
    EmptyGraph,

    #[error("graph has {nodes} nodes, above the limit of {limit} for {algorithm}; use louvain instead")]
    TooLarge {
        algorithm: &'static str,
        nodes: usize,
        limit: usize,
    },

    #[error("cover does not match graph: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
