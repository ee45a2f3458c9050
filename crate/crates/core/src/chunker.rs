//! Shallow parsing of titles and descriptions into flat NP/VP/PP chunks.
//!
//! Tagging is lexicon lookup with a few suffix fallbacks. Chunking is a single
//! left-to-right pass of a small finite-state machine, so chunks never overlap
//! and never nest. Tag extraction keeps the words of noun and verb chunks and
//! drops prepositional chunks, numbers and determiners.

use std::collections::HashMap;
use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WordClass {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Preposition,
    Determiner,
    Number,
    Other,
}

impl WordClass {
    /// Classes never admitted into a tag set.
    pub fn is_stop(self) -> bool {
        matches!(
            self,
            WordClass::Preposition | WordClass::Determiner | WordClass::Number | WordClass::Other
        )
    }
}

impl FromStr for WordClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "Noun" => WordClass::Noun,
            "Verb" => WordClass::Verb,
            "Adjective" => WordClass::Adjective,
            "Adverb" => WordClass::Adverb,
            "Preposition" => WordClass::Preposition,
            "Determiner" => WordClass::Determiner,
            "Number" => WordClass::Number,
            "Other" => WordClass::Other,
            other => return Err(format!("unknown word class {other:?}")),
        })
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub text: String,
    pub position: usize,
    pub class: WordClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChunkLabel {
    NP,
    VP,
    PP,
}

impl fmt::Display for ChunkLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub label: ChunkLabel,
    pub tokens: Vec<TaggedToken>,
    /// Index of the head token within `tokens`.
    pub head: usize,
}

impl Chunk {
    /// Half-open span of sentence positions covered by the chunk.
    pub fn span(&self) -> (usize, usize) {
        let start = self.tokens[0].position;
        (start, start + self.tokens.len())
    }

    pub fn head_token(&self) -> &TaggedToken {
        &self.tokens[self.head]
    }
}

impl fmt::Display for Chunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.label)?;
        for t in &self.tokens {
            write!(f, " {}", t.text)?;
        }
        f.write_str("]")
    }
}

/// Ordered, duplicate-free set of lowercase tags.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TagSet {
    tags: Vec<String>,
}

impl TagSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `tag` unless already present. Returns whether it was inserted.
    pub fn insert(&mut self, tag: impl Into<String>) -> bool {
        let tag = tag.into();
        if self.contains(&tag) {
            return false;
        }
        self.tags.push(tag);
        true
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    pub fn position(&self, tag: &str) -> Option<usize> {
        self.tags.iter().position(|t| t == tag)
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(String::as_str)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.tags
    }
}

impl<S: Into<String>> FromIterator<S> for TagSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut set = TagSet::new();
        for t in iter {
            set.insert(t);
        }
        set
    }
}

/// Splits on whitespace and punctuation, dropping the punctuation.
///
/// Periods inside a word survive, and a word with an internal period keeps its
/// trailing one too, so abbreviations like `U.S.` stay whole. Internal hyphens
/// and apostrophes are kept.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for piece in text.split(|c: char| c.is_whitespace() || is_breaking_punct(c)) {
        if let Some(word) = trim_word(piece) {
            out.push(Token {
                text: word.to_string(),
                position: out.len(),
            });
        }
    }
    out
}

fn is_breaking_punct(c: char) -> bool {
    c.is_ascii_punctuation() && !matches!(c, '.' | '-' | '\'')
}

fn trim_word(piece: &str) -> Option<&str> {
    let start = piece.find(|c: char| c.is_alphanumeric())?;
    let end = piece
        .rfind(|c: char| c.is_alphanumeric())
        .map(|i| i + piece[i..].chars().next().map_or(1, char::len_utf8))?;
    let core = &piece[start..end];
    // "U.S." keeps its final period; "recession." does not.
    if core.contains('.') && piece[end..].starts_with('.') {
        Some(&piece[start..end + 1])
    } else {
        Some(core)
    }
}

/// Word → class table with suffix fallbacks for unknown words.
#[derive(Debug, Clone)]
pub struct Lexicon {
    words: HashMap<String, WordClass>,
}

impl Lexicon {
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_LEXICON).expect("bundled lexicon parses")
    }

    /// Parses `word<TAB>class` lines. `#` starts a comment line.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut words = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: idx + 1, message };
            let (word, class) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("expected word<TAB>class".into()))?;
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(parse_err(format!("invalid word {word:?}")));
            }
            let class = class.trim().parse::<WordClass>().map_err(parse_err)?;
            words.insert(word.to_lowercase(), class);
        }
        Ok(Self { words })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_tsv(&text)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<WordClass> {
        self.words.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains_key(word)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, WordClass)> {
        self.words.iter().map(|(w, c)| (w.as_str(), *c))
    }

    pub fn classify(&self, word: &str) -> WordClass {
        let lower = word.to_lowercase();
        if let Some(c) = self.words.get(&lower) {
            return *c;
        }
        if is_numeric(&lower) {
            return WordClass::Number;
        }
        if lower.len() > 3 && lower.ends_with("ly") {
            return WordClass::Adverb;
        }
        if self.has_verb_stem(&lower) {
            return WordClass::Verb;
        }
        WordClass::Noun
    }

    fn has_verb_stem(&self, w: &str) -> bool {
        let is_verb = |s: &str| self.words.get(s) == Some(&WordClass::Verb);
        let strip = |suffix: &str| w.strip_suffix(suffix).filter(|s| s.len() >= 2);
        if let Some(s) = strip("ed") {
            if is_verb(s) || is_verb(&format!("{s}e")) {
                return true;
            }
        }
        if let Some(s) = strip("ing") {
            if is_verb(s) || is_verb(&format!("{s}e")) {
                return true;
            }
        }
        if let Some(s) = strip("es") {
            if is_verb(s) {
                return true;
            }
        }
        matches!(strip("s"), Some(s) if is_verb(s))
    }
}

fn is_numeric(w: &str) -> bool {
    w.chars().any(|c| c.is_ascii_digit())
        && w.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '%' | '-'))
}

pub fn assign_wordclass(tokens: &[Token], lexicon: &Lexicon) -> Vec<TaggedToken> {
    tokens
        .iter()
        .map(|t| TaggedToken {
            text: t.text.clone(),
            position: t.position,
            class: lexicon.classify(&t.text),
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum NpStage {
    Determiner,
    Modifier,
    Noun,
}

fn np_stage(class: WordClass) -> Option<NpStage> {
    match class {
        WordClass::Determiner | WordClass::Adverb => Some(NpStage::Determiner),
        WordClass::Adjective | WordClass::Number => Some(NpStage::Modifier),
        WordClass::Noun => Some(NpStage::Noun),
        _ => None,
    }
}

/// One left-to-right pass over tagged tokens.
///
/// * `Preposition` becomes a one-word PP.
/// * `Adverb* Verb+` becomes a VP. An adverb run not followed by a verb joins
///   the next NP when one starts there, and is a VP on its own otherwise.
/// * `(Determiner|Adverb)* (Adjective|Number)* Noun*` becomes an NP, advancing
///   through the stages without going back.
/// * `Other` tokens are left unchunked.
pub fn chunk(tokens: &[TaggedToken]) -> Vec<Chunk> {
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let class = tokens[i].class;
        match class {
            WordClass::Preposition => {
                chunks.push(make_chunk(ChunkLabel::PP, &tokens[i..i + 1], 0));
                i += 1;
            }
            WordClass::Other => i += 1,
            WordClass::Verb | WordClass::Adverb => {
                let mut j = i;
                while j < tokens.len() && tokens[j].class == WordClass::Adverb {
                    j += 1;
                }
                let next = tokens.get(j).map(|t| t.class);
                if next == Some(WordClass::Verb) {
                    while j < tokens.len() && tokens[j].class == WordClass::Verb {
                        j += 1;
                    }
                    chunks.push(make_chunk(ChunkLabel::VP, &tokens[i..j], j - i - 1));
                    i = j;
                } else if next.and_then(np_stage).is_some() {
                    i = push_np(tokens, i, &mut chunks);
                } else {
                    chunks.push(make_chunk(ChunkLabel::VP, &tokens[i..j], j - i - 1));
                    i = j;
                }
            }
            _ => i = push_np(tokens, i, &mut chunks),
        }
    }
    chunks
}

fn push_np(tokens: &[TaggedToken], start: usize, chunks: &mut Vec<Chunk>) -> usize {
    let mut stage = NpStage::Determiner;
    let mut j = start;
    while let Some(t) = tokens.get(j) {
        match np_stage(t.class) {
            Some(s) if s >= stage => {
                stage = s;
                j += 1;
            }
            _ => break,
        }
    }
    let run = &tokens[start..j];
    let head = run
        .iter()
        .rposition(|t| t.class == WordClass::Noun)
        .unwrap_or(run.len() - 1);
    chunks.push(make_chunk(ChunkLabel::NP, run, head));
    j
}

fn make_chunk(label: ChunkLabel, run: &[TaggedToken], head: usize) -> Chunk {
    Chunk {
        label,
        tokens: run.to_vec(),
        head,
    }
}

/// Lowercased content words of NP and VP chunks, first occurrence first.
pub fn extract_tags(chunks: &[Chunk]) -> TagSet {
    let mut seen = HashSet::new();
    let mut tags = Vec::new();
    for c in chunks.iter().filter(|c| c.label != ChunkLabel::PP) {
        for t in c.tokens.iter().filter(|t| !t.class.is_stop()) {
            let tag = t.text.to_lowercase();
            if seen.insert(tag.clone()) {
                tags.push(tag);
            }
        }
    }
    TagSet { tags }
}

/// Tokenize → tag → chunk → extract, with one lexicon.
#[derive(Debug, Clone)]
pub struct Chunker {
    lexicon: Lexicon,
}

impl Default for Chunker {
    fn default() -> Self {
        Self::new(Lexicon::bundled())
    }
}

impl Chunker {
    pub fn new(lexicon: Lexicon) -> Self {
        Self { lexicon }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn chunks(&self, text: &str) -> Vec<Chunk> {
        chunk(&assign_wordclass(&tokenize(text), &self.lexicon))
    }

    pub fn tags(&self, text: &str) -> TagSet {
        extract_tags(&self.chunks(text))
    }
}
