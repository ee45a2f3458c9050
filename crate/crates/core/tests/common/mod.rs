#![allow(dead_code)]

use folksograph_core::harness::gen_synthetic_corpus;
use folksograph_core::{Chunker, FolksodrivenTuple, SyntheticCorpusConfig, TableSimilarity};

pub fn synthetic_fd(n_resources: usize, coherence: f64, seed: u64) -> FolksodrivenTuple {
    let cfg = SyntheticCorpusConfig {
        n_resources,
        coherence,
        seed,
        ..SyntheticCorpusConfig::default()
    };
    let records = gen_synthetic_corpus(&cfg).unwrap();
    FolksodrivenTuple::from_corpus(&records, &Chunker::default(), &TableSimilarity::bundled()).unwrap()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
