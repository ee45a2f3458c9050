//! Experiment orchestration: repeated realizations of the Folksodriven graph
//! and its two null models, node sampling, metric aggregation, exposition
//! sweeps, report files and a synthetic corpus generator.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::context::SimilarityProvider;
use crate::error::{Error, Result};
use crate::folksodriven::FolksodrivenTuple;
use crate::ingest::ArticleRecord;
use crate::netmetrics::{format_f64, ExpositionWeighting, TagNetwork, WeightedGraph};
use crate::nullmodels::{gen_ba, gen_diffeo, NullModelConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub realizations: usize,
    pub sample_size: usize,
    pub runs: usize,
    pub seed: u64,
    /// Exposition scales for [`sweep_exposition`], ascending.
    pub lambda_grid: Vec<f64>,
    /// Binarization threshold for path lengths.
    pub threshold: f64,
    /// Base `λ` of `g(e) = 1 / (1 + λ e)`.
    pub lambda: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            realizations: 100,
            sample_size: 400,
            runs: 20,
            seed: 0,
            lambda_grid: vec![0.1, 1.0, 10.0, 100.0],
            threshold: 0.05,
            lambda: 1.0,
        }
    }
}

const CONFIG_KEYS: [&str; 7] = [
    "realizations",
    "sample_size",
    "runs",
    "seed",
    "lambda_grid",
    "threshold",
    "lambda",
];

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.realizations < 1 || self.sample_size < 1 || self.runs < 1 {
            return bad("realizations, sample_size and runs must all be at least 1".into());
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return bad(format!("threshold {} is outside (0, 1]", self.threshold));
        }
        if self.lambda_grid.is_empty() {
            return bad("lambda_grid is empty".into());
        }
        if self.lambda_grid.windows(2).any(|w| w[0] >= w[1]) || self.lambda_grid.iter().any(|x| x.is_nan() || *x < 0.0)
        {
            return bad("lambda_grid must be non-negative and strictly ascending".into());
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda {} must be a finite non-negative number", self.lambda));
        }
        Ok(())
    }

    /// Parses flat `key = value` lines; `#` starts a comment, missing keys
    /// keep their defaults and `lambda_grid` is a comma list, optionally in
    /// brackets.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: idx + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let int = |v: &str| v.parse::<u64>().map_err(|e| err(format!("{key}: {e}")));
            let float = |v: &str| v.parse::<f64>().map_err(|e| err(format!("{key}: {e}")));
            match key {
                "realizations" => cfg.realizations = int(value)? as usize,
                "sample_size" => cfg.sample_size = int(value)? as usize,
                "runs" => cfg.runs = int(value)? as usize,
                "seed" => cfg.seed = int(value)?,
                "threshold" => cfg.threshold = float(value)?,
                "lambda" => cfg.lambda = float(value)?,
                "lambda_grid" => {
                    let inner = value.trim_start_matches('[').trim_end_matches(']');
                    cfg.lambda_grid = inner
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(float)
                        .collect::<Result<_>>()?;
                }
                other => return Err(err(format!("unknown key {other:?}; expected one of {CONFIG_KEYS:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let grid: Vec<String> = self.lambda_grid.iter().map(|x| format_f64(*x)).collect();
        format!(
            "realizations = {}\nsample_size = {}\nruns = {}\nseed = {}\nlambda_grid = [{}]\nthreshold = {}\nlambda = {}\n",
            self.realizations,
            self.sample_size,
            self.runs,
            self.seed,
            grid.join(", "),
            format_f64(self.threshold),
            format_f64(self.lambda)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Folksodriven,
    Ba,
    Diffeo,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Folksodriven, Family::Ba, Family::Diffeo];

    pub fn name(self) -> &'static str {
        match self {
            Family::Folksodriven => "folksodriven",
            Family::Ba => "ba",
            Family::Diffeo => "diffeo",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Metrics of one graph in one (run, realization).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub run: usize,
    pub realization: usize,
    pub family: Family,
    pub nodes: usize,
    pub edges: usize,
    /// Mean and standard deviation of the sampled nodes' clustering coefficients.
    pub mean_cc: f64,
    pub std_cc: f64,
    /// Mean over resources of the per-resource global coefficient.
    pub global_k: f64,
    /// Characteristic path length from the sampled nodes; 0 when no edge
    /// survives the threshold.
    pub path_length: f64,
    pub connected_fraction: f64,
}

/// Mean and population standard deviation of one metric over rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self { mean: 0.0, std: 0.0 };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Self { mean, std: var.sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyAggregate {
    pub family: Family,
    pub nodes: Stat,
    pub edges: Stat,
    pub mean_cc: Stat,
    pub std_cc: Stat,
    pub global_k: Stat,
    pub path_length: Stat,
    pub connected_fraction: Stat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Ordered by (run, realization, family).
    pub rows: Vec<ReportRow>,
    pub aggregates: Vec<FamilyAggregate>,
}

impl ExperimentReport {
    pub fn from_rows(config: ExperimentConfig, rows: Vec<ReportRow>) -> Self {
        let aggregates = aggregate(&rows);
        Self {
            config,
            rows,
            aggregates,
        }
    }

    pub fn aggregate(&self, family: Family) -> Option<&FamilyAggregate> {
        self.aggregates.iter().find(|a| a.family == family)
    }

    pub fn rows_of(&self, family: Family) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.family == family)
    }
}

fn aggregate(rows: &[ReportRow]) -> Vec<FamilyAggregate> {
    Family::ALL
        .into_iter()
        .filter_map(|family| {
            let fam: Vec<&ReportRow> = rows.iter().filter(|r| r.family == family).collect();
            if fam.is_empty() {
                return None;
            }
            let stat = |f: fn(&ReportRow) -> f64| Stat::of(&fam.iter().map(|r| f(r)).collect::<Vec<_>>());
            Some(FamilyAggregate {
                family,
                nodes: stat(|r| r.nodes as f64),
                edges: stat(|r| r.edges as f64),
                mean_cc: stat(|r| r.mean_cc),
                std_cc: stat(|r| r.std_cc),
                global_k: stat(|r| r.global_k),
                path_length: stat(|r| r.path_length),
                connected_fraction: stat(|r| r.connected_fraction),
            })
        })
        .collect()
}

/// Seed for one realization: the base seed offset by its position.
fn realization_seed(cfg: &ExperimentConfig, run: usize, realization: usize) -> u64 {
    cfg.seed
        .wrapping_add((run as u64) * cfg.realizations as u64)
        .wrapping_add(realization as u64)
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sampled node metrics of one graph.
pub fn measure(graph: &WeightedGraph, sample: &[usize], threshold: f64) -> Result<(Stat, f64, f64, f64)> {
    let cc_all = graph.cluster_coefs();
    let sampled: Vec<f64> = sample.iter().map(|&i| cc_all[i]).collect();
    let resources = graph.resources();
    let global_k = if resources.is_empty() {
        0.0
    } else {
        let ks: Vec<f64> = resources
            .iter()
            .map(|r| {
                let nodes = graph.nodes_of(r);
                nodes.iter().map(|&i| cc_all[i]).sum::<f64>() / nodes.len() as f64
            })
            .collect();
        ks.iter().sum::<f64>() / ks.len() as f64
    };
    let (path, frac) = match graph.char_path_length_from(sample, threshold) {
        Ok(pl) => (pl.mean, pl.connected_fraction),
        Err(Error::NoEdges(_)) => (0.0, 0.0),
        Err(e) => return Err(e),
    };
    Ok((Stat::of(&sampled), global_k, path, frac))
}

/// Runs every (run, realization) over the Folksodriven graph, a
/// size-matched BA graph and a diffeomorphic graph, sampling
/// `min(sample_size, n)` nodes of each without replacement.
pub fn run_experiment(
    fd: &FolksodrivenTuple,
    sim: &dyn SimilarityProvider,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    cfg.validate()?;
    if fd.is_empty() {
        return Err(Error::Config("the Folksodriven tuple is empty".into()));
    }
    let network = TagNetwork::from_fd(fd, sim);
    run_on_network(&network, cfg)
}

pub fn run_on_network(network: &TagNetwork, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let g = ExpositionWeighting::new(cfg.lambda);
    let observed = network.to_graph(&g);
    let mut rows = Vec::with_capacity(cfg.runs * cfg.realizations * 3);
    for run in 0..cfg.runs {
        for realization in 0..cfg.realizations {
            let seed = realization_seed(cfg, run, realization);
            let ba = if network.nodes.len() >= 2 {
                Some(gen_ba(&NullModelConfig::matching(network, seed, cfg.lambda), network)?)
            } else {
                None
            };
            let diffeo = gen_diffeo(network, &g, seed)?;
            let graphs = [
                (Family::Folksodriven, Some(&observed)),
                (Family::Ba, ba.as_ref()),
                (Family::Diffeo, Some(&diffeo)),
            ];
            for (k, (family, graph)) in graphs.into_iter().enumerate() {
                let empty = WeightedGraph::empty();
                let graph = graph.unwrap_or(&empty);
                let n = graph.len();
                let mut rng = stream(seed, 10 + k as u64);
                let sample = index::sample(&mut rng, n, cfg.sample_size.min(n)).into_vec();
                let (cc, global_k, path_length, connected_fraction) = measure(graph, &sample, cfg.threshold)?;
                rows.push(ReportRow {
                    run,
                    realization,
                    family,
                    nodes: n,
                    edges: graph.edge_count(),
                    mean_cc: cc.mean,
                    std_cc: cc.std,
                    global_k,
                    path_length,
                    connected_fraction,
                });
            }
        }
    }
    Ok(ExperimentReport::from_rows(cfg.clone(), rows))
}

/// Mean clustering coefficient of the Folksodriven graph with every
/// exposition multiplied by each scale of `cfg.lambda_grid`, in grid order.
pub fn sweep_exposition(
    fd: &FolksodrivenTuple,
    sim: &dyn SimilarityProvider,
    cfg: &ExperimentConfig,
) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    Ok(sweep_network(&TagNetwork::from_fd(fd, sim), cfg))
}

pub fn sweep_network(network: &TagNetwork, cfg: &ExperimentConfig) -> Vec<(f64, f64)> {
    let base = ExpositionWeighting::new(cfg.lambda);
    cfg.lambda_grid
        .iter()
        .map(|&scale| {
            let cc = network.to_graph(&base.scaled(scale)).cluster_coefs();
            let mean = if cc.is_empty() {
                0.0
            } else {
                cc.iter().sum::<f64>() / cc.len() as f64
            };
            (scale, mean)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

const CSV_COLUMNS: [&str; 11] = [
    "kind",
    "run",
    "realization",
    "family",
    "nodes",
    "edges",
    "mean_cc",
    "std_cc",
    "global_k",
    "path_length",
    "connected_fraction",
];

/// Config echo as `# key = value` lines, then one CSV table holding the
/// per-run rows (`kind = row`) followed by per-family `mean` and `std` rows.
pub fn report_to_csv(report: &ExperimentReport) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    let mut out = String::from("# folksograph experiment report\n");
    for line in report.config.to_text().lines() {
        let _ = writeln!(out, "# {line}");
    }
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in &report.rows {
        w.write_record([
            "row".to_string(),
            r.run.to_string(),
            r.realization.to_string(),
            r.family.name().to_string(),
            r.nodes.to_string(),
            r.edges.to_string(),
            format_f64(r.mean_cc),
            format_f64(r.std_cc),
            format_f64(r.global_k),
            format_f64(r.path_length),
            format_f64(r.connected_fraction),
        ])
        .map_err(csv_err)?;
    }
    for a in &report.aggregates {
        for (kind, pick) in [
            ("mean", (|s: Stat| s.mean) as fn(Stat) -> f64),
            ("std", |s: Stat| s.std),
        ] {
            w.write_record([
                kind.to_string(),
                String::new(),
                String::new(),
                a.family.name().to_string(),
                format_f64(pick(a.nodes)),
                format_f64(pick(a.edges)),
                format_f64(pick(a.mean_cc)),
                format_f64(pick(a.std_cc)),
                format_f64(pick(a.global_k)),
                format_f64(pick(a.path_length)),
                format_f64(pick(a.connected_fraction)),
            ])
            .map_err(csv_err)?;
        }
    }
    let body = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
    Ok(out)
}

/// Inverse of [`report_to_csv`].
pub fn report_from_csv(text: &str) -> Result<ExperimentReport> {
    let mut config_text = String::new();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix("# ") {
            Some(c) if body.is_empty() => {
                config_text.push_str(c);
                config_text.push('\n');
            }
            _ => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    let config_text: String = config_text
        .lines()
        .filter(|l| l.contains('='))
        .map(|l| format!("{l}\n"))
        .collect();
    let config = ExperimentConfig::parse(&config_text)?;
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut rows = Vec::new();
    let mut aggregates: Vec<FamilyAggregate> = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let line = idx + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let err = |m: String| Error::Parse { line, message: m };
        let f = |k: usize| {
            rec[k]
                .parse::<f64>()
                .map_err(|e| err(format!("{}: {e}", CSV_COLUMNS[k])))
        };
        let u = |k: usize| {
            rec[k]
                .parse::<usize>()
                .map_err(|e| err(format!("{}: {e}", CSV_COLUMNS[k])))
        };
        let family = Family::from_name(&rec[3]).ok_or_else(|| err(format!("unknown family {:?}", &rec[3])))?;
        match &rec[0] {
            "row" => rows.push(ReportRow {
                run: u(1)?,
                realization: u(2)?,
                family,
                nodes: u(4)?,
                edges: u(5)?,
                mean_cc: f(6)?,
                std_cc: f(7)?,
                global_k: f(8)?,
                path_length: f(9)?,
                connected_fraction: f(10)?,
            }),
            kind @ ("mean" | "std") => {
                let zero = Stat { mean: 0.0, std: 0.0 };
                if kind == "mean" {
                    aggregates.push(FamilyAggregate {
                        family,
                        nodes: zero,
                        edges: zero,
                        mean_cc: zero,
                        std_cc: zero,
                        global_k: zero,
                        path_length: zero,
                        connected_fraction: zero,
                    });
                }
                let a = aggregates
                    .iter_mut()
                    .rev()
                    .find(|a| a.family == family)
                    .ok_or_else(|| err("std row before its mean row".into()))?;
                let set = |s: &mut Stat, v: f64| {
                    if kind == "mean" {
                        s.mean = v
                    } else {
                        s.std = v
                    }
                };
                set(&mut a.nodes, f(4)?);
                set(&mut a.edges, f(5)?);
                set(&mut a.mean_cc, f(6)?);
                set(&mut a.std_cc, f(7)?);
                set(&mut a.global_k, f(8)?);
                set(&mut a.path_length, f(9)?);
                set(&mut a.connected_fraction, f(10)?);
            }
            other => return Err(err(format!("unknown row kind {other:?}"))),
        }
    }
    Ok(ExperimentReport {
        config,
        rows,
        aggregates,
    })
}

pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ReportFormat::Csv => report_to_csv(report)?,
        ReportFormat::Json => {
            if report.rows.is_empty() {
                return Err(Error::EmptyReport);
            }
            serde_json::to_string_pretty(report).map_err(|e| Error::Config(e.to_string()))? + "\n"
        }
    };
    fs::write(path, text).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Parameters of the synthetic corpus standing in for a real crawl.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCorpusConfig {
    pub n_resources: usize,
    pub tags_per_resource: usize,
    /// Probability that a tag comes from the resource's own topic pool rather
    /// than the global pool.
    pub coherence: f64,
    pub seed: u64,
    /// Words per topic pool.
    pub topic_size: usize,
    /// Resources sharing one topic.
    pub resources_per_topic: usize,
    /// Leading tags that go to the title; the rest form the description.
    pub title_tags: usize,
}

impl Default for SyntheticCorpusConfig {
    fn default() -> Self {
        Self {
            n_resources: 100,
            tags_per_resource: 12,
            coherence: 0.9,
            seed: 0,
            topic_size: 20,
            resources_per_topic: 5,
            title_tags: 3,
        }
    }
}

impl SyntheticCorpusConfig {
    pub fn new(n_resources: usize, tags_per_resource: usize, coherence: f64, seed: u64) -> Self {
        Self {
            n_resources,
            tags_per_resource,
            coherence,
            seed,
            ..Self::default()
        }
    }

    pub fn topics(&self) -> usize {
        self.n_resources.div_ceil(self.resources_per_topic.max(1)).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.coherence) {
            return Err(Error::Config(format!("coherence {} is outside [0, 1]", self.coherence)));
        }
        if self.topic_size == 0 || self.resources_per_topic == 0 {
            return Err(Error::Config(
                "topic_size and resources_per_topic must be positive".into(),
            ));
        }
        if self.tags_per_resource > self.topic_size {
            return Err(Error::Config(format!(
                "tags_per_resource {} exceeds topic_size {}",
                self.tags_per_resource, self.topic_size
            )));
        }
        Ok(())
    }

    /// Parses `key=value` pairs separated by commas, e.g.
    /// `resources=125,tags=8,coherence=0.9,seed=7`.
    pub fn parse(params: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for part in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, found {part:?}")))?;
            let bad = |e: &dyn std::fmt::Display| Error::Config(format!("{k}: {e}"));
            let int = |v: &str| v.trim().parse::<usize>().map_err(|e| bad(&e));
            match k.trim() {
                "resources" => cfg.n_resources = int(v)?,
                "tags" => cfg.tags_per_resource = int(v)?,
                "coherence" => cfg.coherence = v.trim().parse().map_err(|e| bad(&e))?,
                "seed" => cfg.seed = v.trim().parse().map_err(|e| bad(&e))?,
                "topic_size" => cfg.topic_size = int(v)?,
                "resources_per_topic" => cfg.resources_per_topic = int(v)?,
                "title_tags" => cfg.title_tags = int(v)?,
                other => return Err(Error::Config(format!("unknown synthetic parameter {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

const CONSONANTS: &[u8] = b"bdfgkmnprtvz";
const VOWELS: &[u8] = b"aeiou";

fn syllables(mut n: usize, out: &mut String) {
    let base = CONSONANTS.len() * VOWELS.len();
    loop {
        let d = n % base;
        out.push(CONSONANTS[d / VOWELS.len()] as char);
        out.push(VOWELS[d % VOWELS.len()] as char);
        n /= base;
        if n == 0 {
            break;
        }
    }
}

/// Pronounceable, lexicon-free word for `(topic, index)`; always tags as a noun.
pub fn synthetic_word(topic: usize, index: usize) -> String {
    let mut w = String::from("zq");
    syllables(topic, &mut w);
    w.push('x');
    syllables(index, &mut w);
    w
}

/// Resource `i` belongs to topic `i / resources_per_topic`. Each of its tags
/// is drawn from that topic's pool with probability `coherence` and from the
/// union of all pools otherwise, without repeats within the resource.
pub fn gen_synthetic_corpus(cfg: &SyntheticCorpusConfig) -> Result<Vec<ArticleRecord>> {
    cfg.validate()?;
    let topics = cfg.topics();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.n_resources);
    for i in 0..cfg.n_resources {
        let topic = i / cfg.resources_per_topic;
        let mut tags: Vec<String> = Vec::with_capacity(cfg.tags_per_resource);
        while tags.len() < cfg.tags_per_resource {
            let word = if rng.gen_bool(cfg.coherence) {
                synthetic_word(topic, rng.gen_range(0..cfg.topic_size))
            } else {
                synthetic_word(rng.gen_range(0..topics), rng.gen_range(0..cfg.topic_size))
            };
            if !tags.contains(&word) {
                tags.push(word);
            }
        }
        let split = cfg.title_tags.min(tags.len());
        let impressions = rng.gen_range(1_000..=5_000u64);
        let ctr = rng.gen_range(0.1..=0.6);
        let clicks = ((impressions as f64) * ctr).round() as u64;
        out.push(ArticleRecord {
            uri: format!("https://synthetic.example/r{i}"),
            title: tags[..split].join(" "),
            description: tags[split..].join(" "),
            clicks,
            impressions,
            timestamp: 1_300_000_000 + 3_600 * i as i64,
        });
    }
    Ok(out)
}
