//! Article corpus loading and validation.
//!
//! A corpus file is UTF-8 JSON Lines: one object per line carrying exactly the
//! keys `uri`, `title`, `description`, `clicks`, `impressions` and `timestamp`.
//! Blank lines are skipped.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArticleRecord {
    pub uri: String,
    pub title: String,
    pub description: String,
    pub clicks: u64,
    pub impressions: u64,
    pub timestamp: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    EmptyUri,
    ClicksExceedImpressions,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyUri => f.write_str("empty uri"),
            Violation::ClicksExceedImpressions => f.write_str("clicks exceed impressions"),
        }
    }
}

/// Every invariant the record breaks. Empty means valid.
pub fn validate_record(rec: &ArticleRecord) -> Vec<Violation> {
    let mut out = Vec::new();
    if rec.uri.is_empty() {
        out.push(Violation::EmptyUri);
    }
    if rec.clicks > rec.impressions {
        out.push(Violation::ClicksExceedImpressions);
    }
    out
}

/// A line that could not become a valid record.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub records: Vec<ArticleRecord>,
    pub errors: Vec<RecordError>,
}

impl Corpus {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

pub fn parse_corpus(text: &str) -> Corpus {
    let mut corpus = Corpus::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ArticleRecord>(raw) {
            Ok(rec) => {
                let violations = validate_record(&rec);
                if violations.is_empty() {
                    corpus.records.push(rec);
                } else {
                    let message = violations
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("; ");
                    corpus.errors.push(RecordError { line, message });
                }
            }
            Err(e) => corpus.errors.push(RecordError {
                line,
                message: e.to_string(),
            }),
        }
    }
    corpus
}

/// Reads a corpus file. Unreadable files are fatal; bad lines are collected.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_corpus(&text))
}

pub fn write_corpus(records: &[ArticleRecord], mut out: impl Write) -> std::io::Result<()> {
    for rec in records {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn save_corpus(records: &[ArticleRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let werr = |source| Error::Write {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(werr)?;
    let mut buf = std::io::BufWriter::new(file);
    write_corpus(records, &mut buf).map_err(werr)?;
    buf.flush().map_err(werr)
}
