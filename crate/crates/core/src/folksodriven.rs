//! The `(C, E, R, X)` tuple binding formal contexts, click-through exposure
//! and resources, plus article slices and tag proposals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::chunker::{Chunker, TagSet};
use crate::context::{self, disambiguate, FormalContext, SimilarityProvider, TagProfiles};
use crate::error::{Error, Result};
use crate::ingest::ArticleRecord;

pub const CONTEXTS_FILE: &str = "contexts.tsv";
pub const POINTS_FILE: &str = "points.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum Direction {
    /// Observed history.
    #[default]
    Past,
    /// Projected records.
    Future,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Past => "past",
            Direction::Future => "future",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "past" => Ok(Direction::Past),
            "future" => Ok(Direction::Future),
            other => Err(format!("unknown direction {other:?}")),
        }
    }
}

/// Click-through rate of a resource, with its time direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeExposition {
    clicks: u64,
    impressions: u64,
    direction: Direction,
}

impl TimeExposition {
    pub fn clicks(&self) -> u64 {
        self.clicks
    }

    pub fn impressions(&self) -> u64 {
        self.impressions
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn ctr(&self) -> f64 {
        self.clicks as f64 / self.impressions as f64
    }
}

pub fn compute_ctr(clicks: u64, impressions: u64, direction: Direction) -> Result<TimeExposition> {
    if impressions == 0 {
        return Err(Error::UndefinedExposure);
    }
    if clicks > impressions {
        return Err(Error::ClicksExceedImpressions { clicks, impressions });
    }
    Ok(TimeExposition {
        clicks,
        impressions,
        direction,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resource(String);

impl Resource {
    pub fn new(uri: impl Into<String>) -> Result<Self> {
        let uri = uri.into();
        if uri.is_empty() {
            return Err(Error::Config("resource uri is empty".into()));
        }
        Ok(Self(uri))
    }

    pub fn uri(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A member of `X`; indices into the tuple's `C`, `E` and `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FdPoint {
    pub context: usize,
    pub exposition: usize,
    pub resource: usize,
}

/// `FD := (C, E, R, X)`. `C`, `E` and `R` hold each distinct value once and
/// are exactly the projections of `X`. `X` keeps one point per article.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FolksodrivenTuple {
    contexts: Vec<FormalContext>,
    expositions: Vec<TimeExposition>,
    resources: Vec<Resource>,
    points: Vec<FdPoint>,
}

struct Interner<T> {
    items: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: Clone + Eq + std::hash::Hash> Interner<T> {
    fn new() -> Self {
        Self {
            items: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, item: T) -> usize {
        if let Some(&i) = self.index.get(&item) {
            return i;
        }
        self.index.insert(item.clone(), self.items.len());
        self.items.push(item);
        self.items.len() - 1
    }
}

/// One point per record, pairing it with `contexts[i]`.
pub fn assemble(records: &[ArticleRecord], contexts: &[FormalContext]) -> Result<FolksodrivenTuple> {
    if records.len() != contexts.len() {
        return Err(Error::Config(format!(
            "{} records but {} contexts",
            records.len(),
            contexts.len()
        )));
    }
    let triples = records
        .iter()
        .zip(contexts)
        .map(|(rec, ctx)| {
            Ok((
                ctx.clone(),
                compute_ctr(rec.clicks, rec.impressions, Direction::Past)?,
                Resource::new(rec.uri.clone())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FolksodrivenTuple::from_triples(triples))
}

/// Per-article contexts: chunked title and description tags, incidence from
/// `sim`, then Similar marks disambiguated against corpus-wide tag profiles.
pub fn build_contexts(
    records: &[ArticleRecord],
    chunker: &Chunker,
    sim: &dyn SimilarityProvider,
) -> Vec<FormalContext> {
    let tags: Vec<(TagSet, TagSet)> = records
        .iter()
        .map(|r| (chunker.tags(&r.title), chunker.tags(&r.description)))
        .collect();
    let profiles = TagProfiles::from_articles(tags.iter().map(|(t, d)| (t, d)));
    tags.into_iter()
        .map(|(t, d)| {
            let ctx = FormalContext::from_tags(t, d, sim);
            let rel = disambiguate(ctx.incidence(), &profiles).relation;
            ctx.with_incidence(rel).expect("pruned incidence stays inside T × D")
        })
        .collect()
}

impl FolksodrivenTuple {
    pub fn from_corpus(records: &[ArticleRecord], chunker: &Chunker, sim: &dyn SimilarityProvider) -> Result<Self> {
        assemble(records, &build_contexts(records, chunker, sim))
    }

    pub fn from_triples(triples: impl IntoIterator<Item = (FormalContext, TimeExposition, Resource)>) -> Self {
        let mut c = Interner::new();
        let mut e = Interner::new();
        let mut r = Interner::new();
        let points = triples
            .into_iter()
            .map(|(ctx, exp, res)| FdPoint {
                context: c.intern(ctx),
                exposition: e.intern(exp),
                resource: r.intern(res),
            })
            .collect();
        Self {
            contexts: c.items,
            expositions: e.items,
            resources: r.items,
            points,
        }
    }

    pub fn contexts(&self) -> &[FormalContext] {
        &self.contexts
    }

    pub fn expositions(&self) -> &[TimeExposition] {
        &self.expositions
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn points(&self) -> &[FdPoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn context_of(&self, p: &FdPoint) -> &FormalContext {
        &self.contexts[p.context]
    }

    pub fn exposition_of(&self, p: &FdPoint) -> &TimeExposition {
        &self.expositions[p.exposition]
    }

    pub fn resource_of(&self, p: &FdPoint) -> &Resource {
        &self.resources[p.resource]
    }

    pub fn resource_index(&self, r: &Resource) -> Option<usize> {
        self.resources.iter().position(|x| x == r)
    }

    pub fn context_index(&self, c: &FormalContext) -> Option<usize> {
        self.contexts.iter().position(|x| x == c)
    }

    /// `A(c, r)`: the points carrying both `c` and `r`.
    pub fn article_slice(&self, c: &FormalContext, r: &Resource) -> Vec<FdPoint> {
        match (self.context_index(c), self.resource_index(r)) {
            (Some(ci), Some(ri)) => self
                .points
                .iter()
                .filter(|p| p.context == ci && p.resource == ri)
                .copied()
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Ranks the title tags of `r`'s contexts.
    ///
    /// Within a context a tag weighs the sum of its incidence weights, divided
    /// by the heaviest title tag of that context. The score multiplies that by
    /// the mean ctr of the points pairing the context with `r`, keeping the
    /// best context per tag. Highest score first, ties by tag.
    pub fn propose_tags(&self, r: &Resource, k: usize) -> Vec<(String, f64)> {
        let Some(ri) = self.resource_index(r) else {
            return Vec::new();
        };
        let mut ctrs: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for p in self.points.iter().filter(|p| p.resource == ri) {
            ctrs.entry(p.context)
                .or_default()
                .push(self.expositions[p.exposition].ctr());
        }
        let mut best: BTreeMap<String, f64> = BTreeMap::new();
        for (ci, cs) in ctrs {
            let mean_ctr = cs.iter().sum::<f64>() / cs.len() as f64;
            let ctx = &self.contexts[ci];
            let weights: Vec<(&str, f64)> = ctx
                .title_tags()
                .iter()
                .map(|t| {
                    let w: u32 = ctx
                        .incidence()
                        .iter()
                        .filter(|(tt, _, _)| *tt == t)
                        .map(|(_, _, e)| e.weight)
                        .sum();
                    (t, w as f64)
                })
                .collect();
            let max = weights.iter().map(|w| w.1).fold(0.0, f64::max);
            for (t, w) in weights {
                let score = if max > 0.0 { w / max * mean_ctr } else { 0.0 };
                let slot = best.entry(t.to_string()).or_insert(score);
                *slot = slot.max(score);
            }
        }
        let mut ranked: Vec<(String, f64)> = best.into_iter().collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(k);
        ranked
    }

    /// Writes `contexts.tsv` and `points.tsv` into `dir`, creating it.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        let werr = |path: &Path| {
            let path = path.to_path_buf();
            move |source| Error::Write { path, source }
        };
        fs::create_dir_all(dir).map_err(werr(dir))?;
        let labels: Vec<String> = (0..self.contexts.len()).map(|i| format!("c{i}")).collect();
        let text = context::write_contexts(labels.iter().map(String::as_str).zip(&self.contexts));
        let cpath = dir.join(CONTEXTS_FILE);
        fs::write(&cpath, text).map_err(werr(&cpath))?;

        let mut pts = String::from("context\tclicks\timpressions\tctr\tdirection\turi\n");
        for p in &self.points {
            let e = &self.expositions[p.exposition];
            pts.push_str(&format!(
                "c{}\t{}\t{}\t{:.16e}\t{}\t{}\n",
                p.context,
                e.clicks,
                e.impressions,
                e.ctr(),
                e.direction,
                self.resources[p.resource]
            ));
        }
        let ppath = dir.join(POINTS_FILE);
        fs::write(&ppath, pts).map_err(werr(&ppath))
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let read = |name: &str| {
            let path = dir.join(name);
            fs::read_to_string(&path).map_err(|source| Error::Read { path, source })
        };
        let contexts: HashMap<String, FormalContext> =
            context::read_contexts(&read(CONTEXTS_FILE)?)?.into_iter().collect();
        let mut triples = Vec::new();
        for (idx, line) in read(POINTS_FILE)?.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let perr = |message: String| Error::Parse { line: idx + 1, message };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 6 {
                return Err(perr(format!("expected 6 columns, found {}", cols.len())));
            }
            let ctx = contexts
                .get(cols[0])
                .ok_or_else(|| perr(format!("unknown context {}", cols[0])))?;
            let num = |s: &str| s.parse::<u64>().map_err(|e| perr(format!("{s:?}: {e}")));
            let direction = cols[4].parse::<Direction>().map_err(perr)?;
            let exp = compute_ctr(num(cols[1])?, num(cols[2])?, direction)?;
            triples.push((ctx.clone(), exp, Resource::new(cols[5])?));
        }
        Ok(Self::from_triples(triples))
    }
}
