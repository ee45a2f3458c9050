//! Folksodriven tag structures: chunk article text into tags, bind tags into
//! formal contexts, tie contexts to resources through click-through exposure,
//! and analyse the resulting weighted tag network against null models.

pub mod chunker;
pub mod context;
pub mod error;
pub mod folksodriven;
pub mod harness;
pub mod ingest;
pub mod netmetrics;
pub mod nullmodels;

pub use chunker::{Chunk, ChunkLabel, Chunker, Lexicon, TagSet, WordClass};
pub use context::{
    FormalConcept, FormalContext, IncidenceMark, IncidenceRelation, SimilarityProvider, TableSimilarity,
};
pub use error::{Error, Result};
pub use folksodriven::{Direction, FdPoint, FolksodrivenTuple, Resource, TimeExposition};
pub use harness::{ExperimentConfig, ExperimentReport, SyntheticCorpusConfig};
pub use ingest::ArticleRecord;
pub use netmetrics::{ExpositionWeighting, WeightedGraph};
pub use nullmodels::NullModelConfig;
