use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("undefined exposure: impressions must be at least 1")]
    UndefinedExposure,
    #[error("clicks ({clicks}) exceed impressions ({impressions})")]
    ClicksExceedImpressions { clicks: u64, impressions: u64 },
    #[error("node index {index} out of range for graph with {len} nodes")]
    NodeOutOfRange { index: usize, len: usize },
    #[error("no node is annotated with resource {0}")]
    UnknownResource(String),
    #[error("no edge survives threshold {0}")]
    NoEdges(f64),
    #[error("concepts belong to different formal contexts")]
    ContextMismatch,
    #[error("at least one concept is required")]
    EmptyConceptSet,
    #[error("context has {objects} title tags, above the lattice cap of {cap}; raise the cap to enumerate")]
    LatticeCapExceeded { objects: usize, cap: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("report has no per-run rows")]
    EmptyReport,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
