use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};

use folksograph_core::context::{write_contexts, Stemmer};
use folksograph_core::folksodriven::build_contexts;
use folksograph_core::harness::{emit_report, gen_synthetic_corpus, run_experiment, sweep_exposition, ReportFormat};
use folksograph_core::ingest::load_corpus;
use folksograph_core::netmetrics::{build_tag_graph, format_f64, TagNetwork};
use folksograph_core::nullmodels::{gen_ba, gen_diffeo};
use folksograph_core::{
    Chunker, Error, ExperimentConfig, ExpositionWeighting, FolksodrivenTuple, Lexicon, NullModelConfig, Resource,
    SyntheticCorpusConfig, TableSimilarity, WeightedGraph,
};

#[derive(Parser)]
#[command(
    name = "folksograph",
    version,
    about = "Folksodriven tag networks from article corpora"
)]
struct Cli {
    /// Word-class lexicon (`word<TAB>class` lines) replacing the bundled one.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Similar-pair table (`a<TAB>b` lines) replacing the bundled one.
    #[arg(long, global = true)]
    similarity: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus file.
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        /// Fail on any invalid record.
        #[arg(long)]
        strict: bool,
    },
    /// Print the chunks and tag set of a sentence.
    Chunk {
        #[arg(long)]
        text: String,
    },
    /// Write the per-article formal contexts of a corpus.
    Context {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the Folksodriven bundle and its tag graph.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Rank tags for a resource.
    Propose {
        #[arg(long)]
        fd: PathBuf,
        #[arg(long)]
        uri: String,
        #[arg(short, default_value_t = 5)]
        k: usize,
    },
    /// Per-node connectivity and clustering of a graph file, as CSV.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
    },
    /// Generate a comparison graph from a Folksodriven bundle.
    Nullmodel {
        #[arg(long, value_enum)]
        kind: NullKind,
        #[arg(long)]
        fd: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// BA node count; defaults to the observed tag count.
        #[arg(long)]
        n: Option<usize>,
        /// BA attachment count; defaults to round(edges / nodes).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Run the comparison experiment and write a report.
    Experiment {
        #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
        fd: Option<PathBuf>,
        /// Synthetic corpus as `resources=N,tags=K,coherence=C,seed=S`.
        #[arg(long)]
        synthetic: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also write the exposition sweep as CSV.
        #[arg(long)]
        sweep: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NullKind {
    Ba,
    Diffeo,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Exit status 2 marks invalid input, 1 any other failure.
enum Failure {
    Invalid(anyhow::Error),
    Other(anyhow::Error),
}

fn invalid(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Invalid(e.into())
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Other(e.into())
    }
}

struct Tools {
    chunker: Chunker,
    sim: TableSimilarity,
}

impl Tools {
    fn load(cli: &Cli) -> Result<Self> {
        let lexicon = match &cli.lexicon {
            Some(p) => Lexicon::load(p)?,
            None => Lexicon::bundled(),
        };
        let sim = match &cli.similarity {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                TableSimilarity::from_tsv(&text, Stemmer::from_lexicon(&lexicon))?
            }
            None if cli.lexicon.is_some() => TableSimilarity::bundled().with_stemmer(Stemmer::from_lexicon(&lexicon)),
            None => TableSimilarity::bundled(),
        };
        Ok(Self {
            chunker: Chunker::new(lexicon),
            sim,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let tools = Tools::load(cli)?;
    match &cli.command {
        Command::Ingest { corpus, strict } => ingest(corpus, *strict),
        Command::Chunk { text } => {
            let chunks = tools.chunker.chunks(text);
            let line: Vec<String> = chunks.iter().map(ToString::to_string).collect();
            println!("{}", line.join(" "));
            let tags = tools.chunker.tags(text);
            println!("{{{}}}", tags.as_slice().join(", "));
            Ok(())
        }
        Command::Context { corpus, out } => {
            let records = clean_corpus(corpus)?;
            let contexts = build_contexts(&records, &tools.chunker, &tools.sim);
            let text = write_contexts(records.iter().map(|r| r.uri.as_str()).zip(&contexts));
            write(out, &text)?;
            Ok(())
        }
        Command::Build { corpus, out, lambda } => {
            let records = clean_corpus(corpus)?;
            let fd = FolksodrivenTuple::from_corpus(&records, &tools.chunker, &tools.sim).map_err(invalid)?;
            fd.save(out)?;
            let graph = build_tag_graph(&fd, &tools.sim, &ExpositionWeighting::new(*lambda));
            graph.save(out.join("graph.tsv"))?;
            eprintln!(
                "{} contexts, {} points, {} tags, {} edges",
                fd.contexts().len(),
                fd.points().len(),
                graph.len(),
                graph.edge_count()
            );
            Ok(())
        }
        Command::Propose { fd, uri, k } => {
            let fd = FolksodrivenTuple::load(fd)?;
            let r = Resource::new(uri.clone()).map_err(invalid)?;
            if fd.resource_index(&r).is_none() {
                return Err(invalid(Error::UnknownResource(uri.clone())));
            }
            for (tag, score) in fd.propose_tags(&r, *k) {
                println!("{tag}\t{}", format_f64(score));
            }
            Ok(())
        }
        Command::Analyze { graph, threshold } => {
            let graph = WeightedGraph::load(graph)?;
            print!("{}", analyze(&graph, *threshold).map_err(invalid)?);
            Ok(())
        }
        Command::Nullmodel {
            kind,
            fd,
            seed,
            out,
            lambda,
            n,
            m,
        } => {
            let fd = FolksodrivenTuple::load(fd)?;
            let network = TagNetwork::from_fd(&fd, &tools.sim);
            let g = ExpositionWeighting::new(*lambda);
            let graph = match kind {
                NullKind::Ba => {
                    let mut cfg = NullModelConfig::matching(&network, *seed, *lambda);
                    if let Some(n) = n {
                        cfg.n = *n;
                        cfg.synthetic = *n > network.nodes.len();
                    }
                    if let Some(m) = m {
                        cfg.m = *m;
                    }
                    cfg.validate().map_err(invalid)?;
                    gen_ba(&cfg, &network).map_err(invalid)?
                }
                NullKind::Diffeo => gen_diffeo(&network, &g, *seed)?,
            };
            graph.save(out)?;
            Ok(())
        }
        Command::Experiment {
            fd,
            synthetic,
            config,
            out,
            format,
            sweep,
        } => {
            let cfg = match config {
                Some(p) => ExperimentConfig::load(p).map_err(invalid)?,
                None => ExperimentConfig::default(),
            };
            let fd = match (fd, synthetic) {
                (Some(dir), _) => FolksodrivenTuple::load(dir)?,
                (None, Some(params)) => {
                    let sc = SyntheticCorpusConfig::parse(params).map_err(invalid)?;
                    let records = gen_synthetic_corpus(&sc).map_err(invalid)?;
                    FolksodrivenTuple::from_corpus(&records, &tools.chunker, &tools.sim)?
                }
                (None, None) => return Err(invalid(anyhow::anyhow!("either --fd or --synthetic is required"))),
            };
            if fd.is_empty() {
                return Err(invalid(anyhow::anyhow!("the Folksodriven bundle is empty")));
            }
            let report = run_experiment(&fd, &tools.sim, &cfg)?;
            let format = match format {
                Format::Csv => ReportFormat::Csv,
                Format::Json => ReportFormat::Json,
            };
            emit_report(&report, format, out)?;
            if let Some(path) = sweep {
                let mut text = String::from("scale,mean_cc\n");
                for (s, cc) in sweep_exposition(&fd, &tools.sim, &cfg)? {
                    let _ = writeln!(text, "{},{}", format_f64(s), format_f64(cc));
                }
                write(path, &text)?;
            }
            Ok(())
        }
    }
}

fn ingest(path: &Path, strict: bool) -> Result<(), Failure> {
    let corpus = load_corpus(path)?;
    for e in &corpus.errors {
        eprintln!("line {}: {}", e.line, e.message);
    }
    println!("{} records, {} rejected", corpus.records.len(), corpus.errors.len());
    if strict && !corpus.is_clean() {
        return Err(invalid(anyhow::anyhow!(
            "{} invalid record(s) in {}",
            corpus.errors.len(),
            path.display()
        )));
    }
    Ok(())
}

fn clean_corpus(path: &Path) -> Result<Vec<folksograph_core::ArticleRecord>, Failure> {
    let corpus = load_corpus(path)?;
    if let Some(e) = corpus.errors.first() {
        return Err(invalid(anyhow::anyhow!(
            "{}: line {}: {} ({} invalid record(s))",
            path.display(),
            e.line,
            e.message,
            corpus.errors.len()
        )));
    }
    Ok(corpus.records)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Node CSV followed by `# key = value` global statistics.
fn analyze(graph: &WeightedGraph, threshold: f64) -> Result<String> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        bail!("threshold {threshold} is outside (0, 1]");
    }
    let k = graph.connectivities();
    let cc = graph.cluster_coefs();
    let mut out = String::from("node,tag,degree,k,cc\n");
    for i in 0..graph.len() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{}",
            graph.node(i).tag,
            graph.binary_degree(i),
            format_f64(k[i]),
            format_f64(cc[i])
        );
    }
    let n = graph.len().max(1) as f64;
    let _ = writeln!(out, "# nodes = {}", graph.len());
    let _ = writeln!(out, "# edges = {}", graph.edge_count());
    let _ = writeln!(out, "# mean_k = {}", format_f64(k.iter().sum::<f64>() / n));
    let _ = writeln!(out, "# mean_cc = {}", format_f64(cc.iter().sum::<f64>() / n));
    match graph.char_path_length(threshold) {
        Ok(pl) => {
            let _ = writeln!(out, "# path_length = {}", format_f64(pl.mean));
            let _ = writeln!(out, "# connected_fraction = {}", format_f64(pl.connected_fraction));
        }
        Err(Error::NoEdges(_)) => {
            let _ = writeln!(out, "# path_length = none above threshold");
        }
        Err(e) => return Err(e.into()),
    }
    for r in graph.resources() {
        let _ = writeln!(out, "# global_cc {r} = {}", format_f64(graph.global_cluster_coef(r)?));
    }
    Ok(out)
}
