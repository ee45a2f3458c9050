//! Formal contexts over title tags (objects) and description tags
//! (attributes), with exact/similar incidence marks, Jaccard disambiguation,
//! concept derivation and the concept lattice.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use crate::chunker::{Lexicon, TagSet, WordClass};
use crate::error::{Error, Result};

const BUNDLED_SIMILARITY: &str = include_str!("../data/similarity.tsv");

/// Default cap on title tags for [`build_lattice`].
pub const DEFAULT_LATTICE_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Identical,
    Similar,
    Unrelated,
}

/// Answers whether two lowercase tags are the same word, similar, or unrelated.
pub trait SimilarityProvider {
    fn relate(&self, a: &str, b: &str) -> Relation;
}

/// Light suffix stemmer: plural `-s` and gerund `-ing`, only onto known
/// noun or verb stems.
#[derive(Debug, Clone, Default)]
pub struct Stemmer {
    stems: HashSet<String>,
}

impl Stemmer {
    pub fn from_lexicon(lex: &Lexicon) -> Self {
        Self::from_words(
            lex.entries()
                .filter(|(_, c)| matches!(c, WordClass::Noun | WordClass::Verb))
                .map(|(w, _)| w),
        )
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            stems: words.into_iter().map(Into::into).collect(),
        }
    }

    pub fn stem(&self, word: &str) -> String {
        let w = word.to_lowercase();
        if let Some(base) = w.strip_suffix("ing").filter(|b| b.len() >= 2) {
            let mut candidates = vec![base.to_string(), format!("{base}e")];
            let b = base.as_bytes();
            if b.len() >= 3 && b[b.len() - 1] == b[b.len() - 2] {
                candidates.push(base[..base.len() - 1].to_string());
            }
            if let Some(c) = candidates.into_iter().find(|c| self.stems.contains(c)) {
                return c;
            }
        }
        if !w.ends_with("ss") {
            if let Some(base) = w.strip_suffix('s').filter(|b| b.len() >= 2) {
                if self.stems.contains(base) {
                    return base.to_string();
                }
            }
        }
        w
    }
}

/// Stemming for identity plus a table of similar pairs.
#[derive(Debug, Clone)]
pub struct TableSimilarity {
    stemmer: Stemmer,
    pairs: HashSet<(String, String)>,
}

impl TableSimilarity {
    /// The shipped table and the bundled lexicon's stems.
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_SIMILARITY, Stemmer::from_lexicon(&Lexicon::bundled()))
            .expect("bundled similarity table parses")
    }

    /// Parses `a<TAB>b` lines (unordered pairs); `#` starts a comment line.
    pub fn from_tsv(text: &str, stemmer: Stemmer) -> Result<Self> {
        let mut pairs = HashSet::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (a, b) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected tag<TAB>tag".into(),
            })?;
            pairs.insert(ordered(&a.trim().to_lowercase(), &b.trim().to_lowercase()));
        }
        Ok(Self { stemmer, pairs })
    }

    pub fn from_pairs<'a>(stemmer: Stemmer, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Self {
            stemmer,
            pairs: pairs.into_iter().map(|(a, b)| ordered(a, b)).collect(),
        }
    }

    pub fn stemmer(&self) -> &Stemmer {
        &self.stemmer
    }

    pub fn with_stemmer(self, stemmer: Stemmer) -> Self {
        Self { stemmer, ..self }
    }
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl SimilarityProvider for TableSimilarity {
    fn relate(&self, a: &str, b: &str) -> Relation {
        let (sa, sb) = (self.stemmer.stem(a), self.stemmer.stem(b));
        if sa == sb {
            return Relation::Identical;
        }
        if self.pairs.contains(&ordered(a, b)) || self.pairs.contains(&ordered(&sa, &sb)) {
            Relation::Similar
        } else {
            Relation::Unrelated
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IncidenceMark {
    Exact,
    Similar,
}

impl IncidenceMark {
    pub fn symbol(self) -> char {
        match self {
            IncidenceMark::Exact => 'X',
            IncidenceMark::Similar => 'S',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IncidenceEntry {
    pub mark: IncidenceMark,
    /// Number of articles in which the pair occurred.
    pub weight: u32,
}

/// `I ⊆ T × D`, keyed by (title tag, description tag).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IncidenceRelation {
    entries: BTreeMap<(String, String), IncidenceEntry>,
}

impl IncidenceRelation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one occurrence of `(t, d)`. An existing Exact mark is never
    /// downgraded.
    pub fn record(&mut self, t: &str, d: &str, mark: IncidenceMark) {
        self.entries
            .entry((t.to_string(), d.to_string()))
            .and_modify(|e| {
                e.weight += 1;
                e.mark = e.mark.min(mark);
            })
            .or_insert(IncidenceEntry { mark, weight: 1 });
    }

    pub fn insert(&mut self, t: &str, d: &str, entry: IncidenceEntry) {
        self.entries.insert((t.to_string(), d.to_string()), entry);
    }

    pub fn get(&self, t: &str, d: &str) -> Option<IncidenceEntry> {
        self.entries.get(&(t.to_string(), d.to_string())).copied()
    }

    pub fn contains(&self, t: &str, d: &str) -> bool {
        self.get(t, d).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, IncidenceEntry)> {
        self.entries.iter().map(|((t, d), e)| (t.as_str(), d.as_str(), *e))
    }

    pub fn count(&self, mark: IncidenceMark) -> usize {
        self.entries.values().filter(|e| e.mark == mark).count()
    }
}

/// Marks every `(t, d)` of `T × D` the provider relates, with weight 1.
pub fn build_incidence(title: &TagSet, description: &TagSet, sim: &dyn SimilarityProvider) -> IncidenceRelation {
    let mut rel = IncidenceRelation::new();
    add_article(&mut rel, title, description, sim);
    rel
}

fn add_article(rel: &mut IncidenceRelation, title: &TagSet, description: &TagSet, sim: &dyn SimilarityProvider) {
    for t in title.iter() {
        for d in description.iter() {
            match sim.relate(t, d) {
                Relation::Identical => rel.record(t, d, IncidenceMark::Exact),
                Relation::Similar => rel.record(t, d, IncidenceMark::Similar),
                Relation::Unrelated => {}
            }
        }
    }
}

/// `C := (T, D, I)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalContext {
    title_tags: TagSet,
    description_tags: TagSet,
    incidence: IncidenceRelation,
}

impl FormalContext {
    /// Fails if the incidence mentions a tag outside `T` or `D`.
    pub fn new(title_tags: TagSet, description_tags: TagSet, incidence: IncidenceRelation) -> Result<Self> {
        for (t, d, _) in incidence.iter() {
            if !title_tags.contains(t) || !description_tags.contains(d) {
                return Err(Error::Config(format!("incidence entry ({t}, {d}) is outside T × D")));
            }
        }
        Ok(Self {
            title_tags,
            description_tags,
            incidence,
        })
    }

    pub fn from_tags(title: TagSet, description: TagSet, sim: &dyn SimilarityProvider) -> Self {
        let incidence = build_incidence(&title, &description, sim);
        Self {
            title_tags: title,
            description_tags: description,
            incidence,
        }
    }

    /// One context over several articles: `T` and `D` are unions in first-seen
    /// order and each incidence weight counts the articles carrying the pair.
    pub fn from_articles<'a, I>(articles: I, sim: &dyn SimilarityProvider) -> Self
    where
        I: IntoIterator<Item = (&'a TagSet, &'a TagSet)>,
    {
        let mut title_tags = TagSet::new();
        let mut description_tags = TagSet::new();
        let mut incidence = IncidenceRelation::new();
        for (t, d) in articles {
            t.iter().for_each(|x| {
                title_tags.insert(x);
            });
            d.iter().for_each(|x| {
                description_tags.insert(x);
            });
            add_article(&mut incidence, t, d, sim);
        }
        Self {
            title_tags,
            description_tags,
            incidence,
        }
    }

    pub fn title_tags(&self) -> &TagSet {
        &self.title_tags
    }

    pub fn description_tags(&self) -> &TagSet {
        &self.description_tags
    }

    pub fn incidence(&self) -> &IncidenceRelation {
        &self.incidence
    }

    pub fn with_incidence(&self, incidence: IncidenceRelation) -> Result<Self> {
        Self::new(self.title_tags.clone(), self.description_tags.clone(), incidence)
    }

    /// Content hash identifying the context; equal contexts agree.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    /// Every tag of the context, title tags first, without duplicates.
    pub fn all_tags(&self) -> TagSet {
        self.title_tags.iter().chain(self.description_tags.iter()).collect()
    }
}

/// `|a ∩ b| / |a ∪ b|`, and 0 for two empty sets.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Agreement score between a title tag and a description tag.
pub trait Agreement {
    fn agreement(&self, title_tag: &str, description_tag: &str) -> f64;
}

/// For each tag, the articles whose title (resp. description) carries it.
/// Agreement is the Jaccard index of a title tag's articles and a description
/// tag's articles.
#[derive(Debug, Clone, Default)]
pub struct TagProfiles {
    title: HashMap<String, BTreeSet<usize>>,
    description: HashMap<String, BTreeSet<usize>>,
}

impl TagProfiles {
    pub fn from_articles<'a, I>(articles: I) -> Self
    where
        I: IntoIterator<Item = (&'a TagSet, &'a TagSet)>,
    {
        let mut p = Self::default();
        for (i, (t, d)) in articles.into_iter().enumerate() {
            for tag in t.iter() {
                p.title.entry(tag.to_string()).or_default().insert(i);
            }
            for tag in d.iter() {
                p.description.entry(tag.to_string()).or_default().insert(i);
            }
        }
        p
    }

    pub fn with_title(mut self, tag: &str, items: impl IntoIterator<Item = usize>) -> Self {
        self.title.insert(tag.to_string(), items.into_iter().collect());
        self
    }

    pub fn with_description(mut self, tag: &str, items: impl IntoIterator<Item = usize>) -> Self {
        self.description.insert(tag.to_string(), items.into_iter().collect());
        self
    }
}

impl Agreement for TagProfiles {
    fn agreement(&self, title_tag: &str, description_tag: &str) -> f64 {
        let empty = BTreeSet::new();
        jaccard(
            self.title.get(title_tag).unwrap_or(&empty),
            self.description.get(description_tag).unwrap_or(&empty),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discarded {
    pub title_tag: String,
    pub description_tag: String,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct Disambiguation {
    pub relation: IncidenceRelation,
    pub discarded: Vec<Discarded>,
}

/// Where a description tag has Similar marks to several title tags, keeps only
/// the best-agreeing ones (all of them on a tie). Exact marks stay.
pub fn disambiguate(rel: &IncidenceRelation, evidence: &dyn Agreement) -> Disambiguation {
    let mut by_d: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (t, d, e) in rel.iter() {
        if e.mark == IncidenceMark::Similar {
            by_d.entry(d).or_default().push(t);
        }
    }
    let mut relation = rel.clone();
    let mut discarded = Vec::new();
    for (d, ts) in by_d.into_iter().filter(|(_, ts)| ts.len() > 1) {
        let scored: Vec<(&str, f64)> = ts.iter().map(|&t| (t, evidence.agreement(t, d))).collect();
        let best = scored.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        for (t, score) in scored.into_iter().filter(|s| s.1 < best) {
            relation.entries.remove(&(t.to_string(), d.to_string()));
            discarded.push(Discarded {
                title_tag: t.to_string(),
                description_tag: d.to_string(),
                score,
            });
        }
    }
    Disambiguation { relation, discarded }
}

/// `A′`: description tags incident to every title tag in `extent`.
pub fn derive_attributes(extent: &BTreeSet<String>, ctx: &FormalContext) -> BTreeSet<String> {
    ctx.description_tags
        .iter()
        .filter(|d| extent.iter().all(|t| ctx.incidence.contains(t, d)))
        .map(str::to_string)
        .collect()
}

/// `B′`: title tags incident to every description tag in `intent`.
pub fn derive_objects(intent: &BTreeSet<String>, ctx: &FormalContext) -> BTreeSet<String> {
    ctx.title_tags
        .iter()
        .filter(|t| intent.iter().all(|d| ctx.incidence.contains(t, d)))
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalConcept {
    pub extent: BTreeSet<String>,
    pub intent: BTreeSet<String>,
    context: u64,
}

impl FormalConcept {
    /// Pairs `extent` with its derived intent.
    pub fn from_extent<I, S>(extent: I, ctx: &FormalContext) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let extent: BTreeSet<String> = extent.into_iter().map(Into::into).collect();
        let intent = derive_attributes(&extent, ctx);
        Self {
            extent,
            intent,
            context: ctx.fingerprint(),
        }
    }

    pub fn context_fingerprint(&self) -> u64 {
        self.context
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConceptOrder {
    Smaller,
    Greater,
    Equal,
    Incomparable,
}

/// Subcontext/supercontext order by extent inclusion.
pub fn concept_order(p: &FormalConcept, q: &FormalConcept) -> Result<ConceptOrder> {
    if p.context != q.context {
        return Err(Error::ContextMismatch);
    }
    Ok(if p.extent == q.extent {
        ConceptOrder::Equal
    } else if p.extent.is_subset(&q.extent) {
        ConceptOrder::Smaller
    } else if q.extent.is_subset(&p.extent) {
        ConceptOrder::Greater
    } else {
        ConceptOrder::Incomparable
    })
}

/// (greatest common subcontext, least common supercontext): the extents'
/// intersection and union with intents re-derived.
pub fn bound_concepts(concepts: &[FormalConcept], ctx: &FormalContext) -> Result<(FormalConcept, FormalConcept)> {
    let first = concepts.first().ok_or(Error::EmptyConceptSet)?;
    let fp = ctx.fingerprint();
    if concepts.iter().any(|c| c.context != fp) {
        return Err(Error::ContextMismatch);
    }
    let mut meet = first.extent.clone();
    let mut join = first.extent.clone();
    for c in &concepts[1..] {
        meet.retain(|t| c.extent.contains(t));
        join.extend(c.extent.iter().cloned());
    }
    Ok((
        FormalConcept::from_extent(meet, ctx),
        FormalConcept::from_extent(join, ctx),
    ))
}

/// Concepts as nodes, covering pairs as `(lower, upper)` edges.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub concepts: Vec<FormalConcept>,
    pub edges: Vec<(usize, usize)>,
}

impl Lattice {
    pub fn find_intent(&self, intent: &BTreeSet<String>) -> Option<&FormalConcept> {
        self.concepts.iter().find(|c| &c.intent == intent)
    }

    /// Node list then edge list, tab separated.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# nodes: index<TAB>extent<TAB>intent\n");
        for (i, c) in self.concepts.iter().enumerate() {
            let ext: Vec<&str> = c.extent.iter().map(String::as_str).collect();
            let int: Vec<&str> = c.intent.iter().map(String::as_str).collect();
            let _ = writeln!(s, "{i}\t{}\t{}", ext.join(","), int.join(","));
        }
        s.push_str("# edges: lower<TAB>upper\n");
        for (a, b) in &self.edges {
            let _ = writeln!(s, "{a}\t{b}");
        }
        s
    }
}

/// Enumerates all closed extents with NextClosure in lectic order.
pub fn build_lattice(ctx: &FormalContext, cap: usize) -> Result<Lattice> {
    let n = ctx.title_tags.len();
    if n > cap || n > 64 {
        return Err(Error::LatticeCapExceeded {
            objects: n,
            cap: cap.min(64),
        });
    }
    let objects = ctx.title_tags.as_slice();
    let attrs = ctx.description_tags.as_slice();
    // For each attribute, the mask of objects incident to it.
    let attr_masks: Vec<u64> = attrs
        .iter()
        .map(|d| {
            objects
                .iter()
                .enumerate()
                .filter(|(_, t)| ctx.incidence.contains(t, d))
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let closure = |a: u64| -> u64 { attr_masks.iter().filter(|&&m| m & a == a).fold(full, |acc, &m| acc & m) };

    let mut extents = Vec::new();
    let mut a = closure(0);
    'outer: loop {
        extents.push(a);
        for i in (0..n).rev() {
            let bit = 1u64 << i;
            if a & bit != 0 {
                continue;
            }
            let below = bit - 1;
            let b = closure((a & below) | bit);
            if b & below == a & below {
                a = b;
                continue 'outer;
            }
        }
        break;
    }

    extents.sort_by_key(|m| (m.count_ones(), *m));
    let concepts: Vec<FormalConcept> = extents
        .iter()
        .map(|&m| FormalConcept::from_extent((0..n).filter(|i| m & (1 << i) != 0).map(|i| objects[i].clone()), ctx))
        .collect();
    let sub = |p: u64, q: u64| p != q && p & q == p;
    let mut edges = Vec::new();
    for (i, &p) in extents.iter().enumerate() {
        for (j, &q) in extents.iter().enumerate() {
            if sub(p, q) && !extents.iter().any(|&r| sub(p, r) && sub(r, q)) {
                edges.push((i, j));
            }
        }
    }
    Ok(Lattice { concepts, edges })
}

/// Writes contexts as incidence tables: a `# context <label>` line, a header
/// row `D\T` followed by the title tags, then one row per description tag with
/// cells `X`, `S` or empty. Weights above 1 are written as `X:3`. Blocks are
/// separated by blank lines.
pub fn write_contexts<'a, I>(contexts: I) -> String
where
    I: IntoIterator<Item = (&'a str, &'a FormalContext)>,
{
    let mut s = String::new();
    for (k, (label, ctx)) in contexts.into_iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "# context {label}");
        s.push_str("D\\T");
        for t in ctx.title_tags.iter() {
            s.push('\t');
            s.push_str(t);
        }
        s.push('\n');
        for d in ctx.description_tags.iter() {
            s.push_str(d);
            for t in ctx.title_tags.iter() {
                s.push('\t');
                if let Some(e) = ctx.incidence.get(t, d) {
                    s.push(e.mark.symbol());
                    if e.weight != 1 {
                        let _ = write!(s, ":{}", e.weight);
                    }
                }
            }
            s.push('\n');
        }
    }
    s
}

/// Inverse of [`write_contexts`].
pub fn read_contexts(text: &str) -> Result<Vec<(String, FormalContext)>> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |line: usize, message: String| Error::Parse {
            line: line + 1,
            message,
        };
        let label = line
            .strip_prefix("# context")
            .ok_or_else(|| err(idx, "expected `# context <label>`".into()))?
            .trim()
            .to_string();
        let (hidx, header) = lines.next().ok_or_else(|| err(idx, "missing header row".into()))?;
        let mut cols = header.split('\t');
        if cols.next() != Some("D\\T") {
            return Err(err(hidx, "header must start with D\\T".into()));
        }
        let title: TagSet = cols.map(str::to_string).collect();
        let mut description = TagSet::new();
        let mut incidence = IncidenceRelation::new();
        while let Some((ridx, row)) = lines.next_if(|(_, l)| !l.trim().is_empty()) {
            let mut cells = row.split('\t');
            let d = cells.next().unwrap_or_default().to_string();
            let cells: Vec<&str> = cells.collect();
            if cells.len() != title.len() {
                return Err(err(
                    ridx,
                    format!("expected {} cells, found {}", title.len(), cells.len()),
                ));
            }
            for (t, cell) in title.iter().zip(cells) {
                if cell.is_empty() {
                    continue;
                }
                let (sym, weight) = match cell.split_once(':') {
                    Some((s, w)) => (
                        s,
                        w.parse::<u32>()
                            .map_err(|e| err(ridx, format!("bad weight {w:?}: {e}")))?,
                    ),
                    None => (cell, 1),
                };
                let mark = match sym {
                    "X" => IncidenceMark::Exact,
                    "S" => IncidenceMark::Similar,
                    other => return Err(err(ridx, format!("unknown mark {other:?}"))),
                };
                incidence.insert(t, &d, IncidenceEntry { mark, weight });
            }
            description.insert(d);
        }
        out.push((label, FormalContext::new(title, description, incidence)?));
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::chunker::Chunker;
    use proptest::prelude::*;

    pub(crate) const TITLE: &str = "Stocks seesaw in volatile trade";
    pub(crate) const DESCRIPTION: &str = "U.S. stocks slid in choppy trading as a dearth of economic news left investors hesitant to make big bets amid worries about a potential global recession.";

    pub(crate) fn worked_context() -> FormalContext {
        let ch = Chunker::default();
        FormalContext::from_tags(ch.tags(TITLE), ch.tags(DESCRIPTION), &TableSimilarity::bundled())
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn stemming_examples() {
        let st = Stemmer::from_lexicon(&Lexicon::bundled());
        assert_eq!(st.stem("trading"), "trade");
        assert_eq!(st.stem("Stocks"), "stock");
        assert_eq!(st.stem("news"), "news");
        assert_eq!(st.stem("glass"), "glass");
    }

    #[test]
    fn incidence_examples() {
        let sim = TableSimilarity::bundled();
        assert_eq!(sim.relate("stocks", "stocks"), Relation::Identical);
        assert_eq!(sim.relate("trade", "trading"), Relation::Identical);
        assert_eq!(sim.relate("volatile", "hesitant"), Relation::Similar);
        assert_eq!(sim.relate("hesitant", "volatile"), Relation::Similar);
        assert_eq!(sim.relate("seesaw", "news"), Relation::Unrelated);

        let ctx = worked_context();
        let rel = ctx.incidence();
        assert_eq!(rel.get("stocks", "stocks").unwrap().mark, IncidenceMark::Exact);
        assert_eq!(rel.get("trade", "trading").unwrap().mark, IncidenceMark::Exact);
        assert_eq!(rel.get("volatile", "hesitant").unwrap().mark, IncidenceMark::Similar);
        assert!(rel.iter().all(|(_, _, e)| e.weight == 1));
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(jaccard(&set(&["a"]), &set(&["b"])), 0.0);
        assert_eq!(jaccard(&set(&["a", "b"]), &set(&["a", "b"])), 1.0);
        assert_eq!(jaccard(&set(&["a", "b"]), &set(&["b", "c"])), 1.0 / 3.0);
        assert_eq!(jaccard::<String>(&set(&[]), &set(&[])), 0.0);
    }

    #[test]
    fn disambiguate_single_mark_unchanged() {
        let mut rel = IncidenceRelation::new();
        rel.record("t", "d", IncidenceMark::Similar);
        let out = disambiguate(&rel, &TagProfiles::default());
        assert_eq!(out.relation, rel);
        assert!(out.discarded.is_empty());
    }

    #[test]
    fn disambiguate_keeps_worked_context_ties() {
        let ch = Chunker::default();
        let (t, d) = (ch.tags(TITLE), ch.tags(DESCRIPTION));
        let ctx = worked_context();
        let out = disambiguate(ctx.incidence(), &TagProfiles::from_articles([(&t, &d)]));
        assert_eq!(&out.relation, ctx.incidence());
        assert!(out.relation.contains("seesaw", "choppy"));
        assert!(out.relation.contains("volatile", "choppy"));
    }

    #[test]
    fn disambiguate_keeps_argmax() {
        let mut rel = IncidenceRelation::new();
        for t in ["t1", "t2", "t3"] {
            rel.record(t, "d", IncidenceMark::Similar);
        }
        rel.record("t2", "e", IncidenceMark::Exact);
        rel.record("t3", "e", IncidenceMark::Similar);
        let profiles = TagProfiles::default()
            .with_description("d", 0..5)
            .with_title("t1", [0, 1, 2])
            .with_title("t2", [0])
            .with_title("t3", [4])
            .with_description("e", [9]);
        // Brute-force Jaccard of each candidate against d's items.
        let d_items: BTreeSet<usize> = (0..5).collect();
        let oracle = |items: &[usize]| {
            let s: BTreeSet<usize> = items.iter().copied().collect();
            s.intersection(&d_items).count() as f64 / s.union(&d_items).count() as f64
        };
        assert_eq!(oracle(&[0, 1, 2]), 0.6);
        assert_eq!(oracle(&[0]), 0.2);
        assert_eq!(oracle(&[4]), 0.2);

        let out = disambiguate(&rel, &profiles);
        assert!(out.relation.contains("t1", "d"));
        assert!(!out.relation.contains("t2", "d"));
        assert!(!out.relation.contains("t3", "d"));
        // e: the Exact entry is untouched; its only Similar rival is alone.
        assert!(out.relation.contains("t2", "e"));
        assert!(out.relation.contains("t3", "e"));
        assert_eq!(out.discarded.len(), 2);
        assert!(out.discarded.iter().all(|x| x.score == 0.2));
    }

    #[test]
    fn derivation_examples() {
        let ctx = worked_context();
        assert_eq!(
            derive_attributes(&set(&["stocks"]), &ctx),
            set(&["stocks", "trading", "economic", "investors", "recession"])
        );
        assert_eq!(
            derive_attributes(&set(&["seesaw"]), &ctx),
            set(&["slid", "choppy", "bets"])
        );
        assert_eq!(
            derive_attributes(&set(&["volatile"]), &ctx),
            set(&["choppy", "hesitant"])
        );
        let all: BTreeSet<String> = ctx.description_tags().iter().map(String::from).collect();
        assert_eq!(derive_attributes(&BTreeSet::new(), &ctx), all);
    }

    #[test]
    fn order_examples() {
        let ctx = worked_context();
        let a = FormalConcept::from_extent(["stocks"], &ctx);
        let b = FormalConcept::from_extent(["seesaw"], &ctx);
        let f = FormalConcept::from_extent(["stocks", "seesaw", "volatile"], &ctx);
        assert_eq!(concept_order(&a, &f).unwrap(), ConceptOrder::Smaller);
        assert_eq!(concept_order(&f, &a).unwrap(), ConceptOrder::Greater);
        assert_eq!(concept_order(&a, &a).unwrap(), ConceptOrder::Equal);
        assert_eq!(concept_order(&a, &b).unwrap(), ConceptOrder::Incomparable);

        let other = FormalContext::from_tags(
            ["x"].into_iter().collect(),
            ["y"].into_iter().collect(),
            &TableSimilarity::bundled(),
        );
        let z = FormalConcept::from_extent(["x"], &other);
        assert!(matches!(concept_order(&a, &z), Err(Error::ContextMismatch)));
    }

    #[test]
    fn bounds_examples() {
        let ctx = worked_context();
        let a = FormalConcept::from_extent(["stocks"], &ctx);
        let d = FormalConcept::from_extent(["trade"], &ctx);
        assert_eq!(a.intent, d.intent);
        let (meet, join) = bound_concepts(&[a.clone(), d.clone()], &ctx).unwrap();
        assert!(meet.extent.is_empty());
        assert_eq!(meet.intent.len(), ctx.description_tags().len());
        assert_eq!(join.extent, set(&["stocks", "trade"]));
        // brute force: attributes shared by stocks and trade
        let brute: BTreeSet<String> = ctx
            .description_tags()
            .iter()
            .filter(|x| ctx.incidence().contains("stocks", x) && ctx.incidence().contains("trade", x))
            .map(String::from)
            .collect();
        assert_eq!(join.intent, brute);

        let (m1, j1) = bound_concepts(std::slice::from_ref(&a), &ctx).unwrap();
        assert_eq!(m1, a);
        assert_eq!(j1, a);

        let four: Vec<_> = ["stocks", "seesaw", "volatile", "trade"]
            .iter()
            .map(|t| FormalConcept::from_extent([*t], &ctx))
            .collect();
        let (_, top) = bound_concepts(&four, &ctx).unwrap();
        assert_eq!(top.extent, set(&["stocks", "seesaw", "volatile", "trade"]));

        assert!(matches!(bound_concepts(&[], &ctx), Err(Error::EmptyConceptSet)));
    }

    #[test]
    fn lattice_of_empty_context() {
        let ctx = FormalContext::new(TagSet::new(), TagSet::new(), IncidenceRelation::new()).unwrap();
        let lat = build_lattice(&ctx, DEFAULT_LATTICE_CAP).unwrap();
        assert_eq!(lat.concepts.len(), 1);
        assert!(lat.concepts[0].extent.is_empty());
        assert!(lat.concepts[0].intent.is_empty());
        assert!(lat.edges.is_empty());
    }

    #[test]
    fn lattice_of_worked_example_holds_its_concepts() {
        let ctx = worked_context();
        let lat = build_lattice(&ctx, DEFAULT_LATTICE_CAP).unwrap();
        for t in ["stocks", "seesaw", "volatile", "trade"] {
            let c = FormalConcept::from_extent([t], &ctx);
            let node = lat.find_intent(&c.intent).expect("intent is a lattice node");
            assert!(c.extent.is_subset(&node.extent));
        }
        // stocks and trade share their intent, so they close together
        let node = lat
            .find_intent(&set(&["stocks", "trading", "economic", "investors", "recession"]))
            .unwrap();
        assert_eq!(node.extent, set(&["stocks", "trade"]));
    }

    #[test]
    fn lattice_of_diagonal_is_a_diamond() {
        let mut rel = IncidenceRelation::new();
        rel.record("a", "x", IncidenceMark::Exact);
        rel.record("b", "y", IncidenceMark::Exact);
        let ctx = FormalContext::new(["a", "b"].into_iter().collect(), ["x", "y"].into_iter().collect(), rel).unwrap();
        let lat = build_lattice(&ctx, 8).unwrap();
        // brute force: every subset of {a,b} is closed here
        let mut closed = 0;
        for mask in 0..4u8 {
            let ext: BTreeSet<String> = [(1, "a"), (2, "b")]
                .iter()
                .filter(|(b, _)| mask & b != 0)
                .map(|(_, t)| t.to_string())
                .collect();
            if derive_objects(&derive_attributes(&ext, &ctx), &ctx) == ext {
                closed += 1;
            }
        }
        assert_eq!(closed, 4);
        assert_eq!(lat.concepts.len(), 4);
        assert_eq!(lat.edges.len(), 4);
    }

    #[test]
    fn lattice_cap_is_enforced() {
        let title: TagSet = (0..10).map(|i| format!("t{i}")).collect();
        let ctx = FormalContext::new(title, TagSet::new(), IncidenceRelation::new()).unwrap();
        assert!(matches!(
            build_lattice(&ctx, 5),
            Err(Error::LatticeCapExceeded { objects: 10, cap: 5 })
        ));
    }

    #[test]
    fn context_table_round_trip() {
        let ctx = worked_context();
        let mut merged = ctx.incidence().clone();
        merged.record("stocks", "stocks", IncidenceMark::Exact);
        let heavier = ctx.with_incidence(merged).unwrap();
        let text = write_contexts([("http://a", &ctx), ("http://b", &heavier)]);
        assert!(text.contains("stocks\tX:2\t\t\tS\n"));
        let back = read_contexts(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].0, "http://a");
        assert_eq!(back[0].1, ctx);
        assert_eq!(back[1].1, heavier);
    }

    #[test]
    fn context_table_rejects_unknown_marks() {
        let err = read_contexts("# context x\nD\\T\ta\nd\tQ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn from_articles_counts_weights() {
        let sim = TableSimilarity::bundled();
        let t: TagSet = ["stocks"].into_iter().collect();
        let d1: TagSet = ["stocks", "news"].into_iter().collect();
        let d2: TagSet = ["stocks"].into_iter().collect();
        let ctx = FormalContext::from_articles([(&t, &d1), (&t, &d2)], &sim);
        assert_eq!(ctx.incidence().get("stocks", "stocks").unwrap().weight, 2);
        assert_eq!(ctx.description_tags().len(), 2);
    }

    fn random_context(objects: usize, attrs: usize, bits: &[bool]) -> FormalContext {
        let mut rel = IncidenceRelation::new();
        for i in 0..objects {
            for j in 0..attrs {
                if bits[i * attrs + j] {
                    rel.record(&format!("t{i}"), &format!("d{j}"), IncidenceMark::Similar);
                }
            }
        }
        FormalContext::new(
            (0..objects).map(|i| format!("t{i}")).collect(),
            (0..attrs).map(|j| format!("d{j}")).collect(),
            rel,
        )
        .unwrap()
    }

    fn subset(ctx: &FormalContext, mask: u32) -> BTreeSet<String> {
        ctx.title_tags()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| t.to_string())
            .collect()
    }

    proptest! {
        #[test]
        fn jaccard_is_symmetric_and_bounded(
            a in proptest::collection::btree_set(0u8..20, 0..10),
            b in proptest::collection::btree_set(0u8..20, 0..10),
        ) {
            let j = jaccard(&a, &b);
            prop_assert!((0.0..=1.0).contains(&j));
            prop_assert_eq!(j, jaccard(&b, &a));
            if !a.is_empty() {
                prop_assert_eq!(jaccard(&a, &a), 1.0);
            }
        }

        #[test]
        fn derivation_is_antitone_and_closed(
            objects in 1usize..=10,
            attrs in 0usize..8,
            bits in proptest::collection::vec(any::<bool>(), 80),
        ) {
            let ctx = random_context(objects, attrs, &bits);
            let lat = build_lattice(&ctx, 64).unwrap();
            let mut closed_count = 0;
            for m in 0..(1u32 << objects) {
                let a = subset(&ctx, m);
                let da = derive_attributes(&a, &ctx);
                let closed = derive_objects(&da, &ctx);
                prop_assert_eq!(derive_attributes(&closed, &ctx), da.clone());
                if closed == a {
                    closed_count += 1;
                }
                // antitone against every superset obtained by one more object
                for i in 0..objects {
                    let b = subset(&ctx, m | (1 << i));
                    prop_assert!(derive_attributes(&b, &ctx).is_subset(&da));
                }
            }
            prop_assert_eq!(lat.concepts.len(), closed_count);
            // covering edges point upward and form no cycle
            for &(lo, hi) in &lat.edges {
                prop_assert!(lat.concepts[lo].extent.len() < lat.concepts[hi].extent.len());
                prop_assert!(lat.concepts[lo].extent.is_subset(&lat.concepts[hi].extent));
            }
        }

        #[test]
        fn bounds_bracket_inputs(
            bits in proptest::collection::vec(any::<bool>(), 36),
            picks in proptest::collection::vec(0u32..64, 1..5),
        ) {
            let ctx = random_context(6, 6, &bits);
            let concepts: Vec<_> = picks.iter().map(|&m| FormalConcept::from_extent(subset(&ctx, m), &ctx)).collect();
            let (lo, hi) = bound_concepts(&concepts, &ctx).unwrap();
            for c in &concepts {
                let below = concept_order(&lo, c).unwrap();
                let above = concept_order(&hi, c).unwrap();
                prop_assert!(matches!(below, ConceptOrder::Smaller | ConceptOrder::Equal));
                prop_assert!(matches!(above, ConceptOrder::Greater | ConceptOrder::Equal));
            }
        }

        #[test]
        fn disambiguation_only_prunes_similar(
            bits in proptest::collection::vec(0u8..3, 25),
            items in proptest::collection::vec(proptest::collection::btree_set(0usize..6, 0..6), 10),
        ) {
            let mut rel = IncidenceRelation::new();
            for (k, b) in bits.iter().enumerate() {
                let (t, d) = (format!("t{}", k / 5), format!("d{}", k % 5));
                match b {
                    1 => rel.record(&t, &d, IncidenceMark::Exact),
                    2 => rel.record(&t, &d, IncidenceMark::Similar),
                    _ => {}
                }
            }
            let mut profiles = TagProfiles::default();
            for i in 0..5 {
                profiles = profiles
                    .with_title(&format!("t{i}"), items[i].iter().copied())
                    .with_description(&format!("d{i}"), items[i + 5].iter().copied());
            }
            let out = disambiguate(&rel, &profiles);
            prop_assert!(out.relation.len() <= rel.len());
            prop_assert_eq!(out.relation.count(IncidenceMark::Exact), rel.count(IncidenceMark::Exact));
            for (t, d, e) in out.relation.iter() {
                prop_assert_eq!(rel.get(t, d), Some(e));
            }
        }
    }
}
