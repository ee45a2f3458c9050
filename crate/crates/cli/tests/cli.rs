use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_folksograph"))
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/articles.jsonl")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn chunk_prints_chunks_and_tags() {
    let o = run(&["chunk", "--text", "Stocks seesaw in volatile trade"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "[NP Stocks] [VP seesaw] [PP in] [NP volatile trade]\n{stocks, seesaw, volatile, trade}\n"
    );
}

#[test]
fn chunk_with_custom_lexicon() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("lex.tsv");
    fs::write(&lex, "in\tPreposition\nthe\tDeterminer\nred\tAdjective\n").unwrap();
    let o = run(&["chunk", "--lexicon", p(&lex), "--text", "the red fox in boxes"]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(stdout(&o), "[NP the red fox] [PP in] [NP boxes]\n{red, fox, boxes}\n");
}

#[test]
fn ingest_reports_and_strict_fails_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    let mut text = fs::read_to_string(corpus()).unwrap();
    text.push_str("{\"uri\":\"u\",\"title\":\"t\",\"description\":\"d\",\"clicks\":5,\"impressions\":2,\"timestamp\":0}\nnot json\n");
    fs::write(&bad, text).unwrap();

    let ok = run(&["ingest", "--corpus", p(&corpus()), "--strict"]);
    assert!(ok.status.success());
    assert_eq!(stdout(&ok), "4 records, 0 rejected\n");

    let lax = run(&["ingest", "--corpus", p(&bad)]);
    assert!(lax.status.success());
    assert_eq!(stdout(&lax), "4 records, 2 rejected\n");
    let err = String::from_utf8(lax.stderr).unwrap();
    assert!(err.contains("line 5: clicks exceed impressions"), "{err}");
    assert!(err.contains("line 6:"), "{err}");

    let strict = run(&["ingest", "--corpus", p(&bad), "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn missing_corpus_fails_with_code_one() {
    let o = run(&["ingest", "--corpus", "/nonexistent/corpus.jsonl"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn context_writes_the_incidence_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ctx.tsv");
    assert!(run(&["context", "--corpus", p(&corpus()), "--out", p(&out)])
        .status
        .success());
    let text = fs::read_to_string(&out).unwrap();
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 4);
    let first: Vec<&str> = blocks[0].lines().collect();
    assert_eq!(first[0], "# context https://news.example/markets/stocks-seesaw");
    assert_eq!(first[1], "D\\T\tstocks\tseesaw\tvolatile\ttrade");
    assert!(first.contains(&"stocks\tX\t\t\tS"));
    assert!(first.contains(&"trading\tS\t\t\tX"));
    assert_eq!(first.len(), 2 + 19);
}

#[test]
fn build_propose_analyze_nullmodel() {
    let dir = tempfile::tempdir().unwrap();
    let fd = dir.path().join("fd");
    assert!(run(&["build", "--corpus", p(&corpus()), "--out", p(&fd)])
        .status
        .success());
    for f in ["contexts.tsv", "points.tsv", "graph.tsv", "graph.tsv.nodes"] {
        assert!(fd.join(f).exists(), "{f}");
    }

    let o = run(&[
        "propose",
        "--fd",
        p(&fd),
        "--uri",
        "https://news.example/markets/stocks-seesaw",
        "-k",
        "2",
    ]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 2);
    let scores: Vec<f64> = lines
        .iter()
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(scores[0] >= scores[1] && scores[1] >= 0.0);
    assert_eq!(
        run(&["propose", "--fd", p(&fd), "--uri", "https://nowhere.example/"])
            .status
            .code(),
        Some(2)
    );

    let o = run(&["analyze", "--graph", p(&fd.join("graph.tsv"))]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("node,tag,degree,k,cc"));
    let nodes = fs::read_to_string(fd.join("graph.tsv.nodes")).unwrap().lines().count();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), nodes + 1);
    assert!(text.contains(&format!("# nodes = {nodes}\n")));
    assert!(text.contains("# path_length = "));
    assert!(text.contains("# global_cc https://news.example/tech/chip-demand = "));
    for row in text.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let cc: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&cc));
    }
    assert_eq!(
        run(&["analyze", "--graph", p(&fd.join("graph.tsv")), "--threshold", "0"])
            .status
            .code(),
        Some(2)
    );

    let source_edges = fs::read_to_string(fd.join("graph.tsv")).unwrap().lines().count();
    let ba = dir.path().join("ba.tsv");
    assert!(run(&[
        "nullmodel",
        "--kind",
        "ba",
        "--fd",
        p(&fd),
        "--seed",
        "4",
        "--out",
        p(&ba)
    ])
    .status
    .success());
    assert_eq!(
        fs::read_to_string(ba.with_extension("tsv.nodes"))
            .unwrap()
            .lines()
            .count(),
        nodes
    );
    let diffeo = dir.path().join("diffeo.tsv");
    assert!(run(&[
        "nullmodel",
        "--kind",
        "diffeo",
        "--fd",
        p(&fd),
        "--seed",
        "4",
        "--out",
        p(&diffeo)
    ])
    .status
    .success());
    assert_eq!(fs::read_to_string(&diffeo).unwrap().lines().count(), source_edges);
    let bad = run(&["nullmodel", "--kind", "ba", "--fd", p(&fd), "--m", "0", "--out", p(&ba)]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn experiment_from_fd_and_synthetic() {
    let dir = tempfile::tempdir().unwrap();
    let fd = dir.path().join("fd");
    assert!(run(&["build", "--corpus", p(&corpus()), "--out", p(&fd)])
        .status
        .success());
    let cfg = dir.path().join("exp.cfg");
    fs::write(
        &cfg,
        "# small\nrealizations = 2\nruns = 1\nsample_size = 10\nlambda_grid = [1, 10]\n",
    )
    .unwrap();

    let out = dir.path().join("report.csv");
    let sweep = dir.path().join("sweep.csv");
    let o = bin()
        .args([
            "experiment",
            "--fd",
            p(&fd),
            "--config",
            p(&cfg),
            "--out",
            p(&out),
            "--sweep",
            p(&sweep),
        ])
        .output()
        .unwrap();
    assert!(o.status.success(), "{o:?}");
    let report = fs::read_to_string(&out).unwrap();
    assert!(report.starts_with("# folksograph experiment report\n# realizations = 2\n"));
    assert_eq!(report.lines().filter(|l| l.starts_with("row,")).count(), 2 * 3);
    assert_eq!(fs::read_to_string(&sweep).unwrap().lines().count(), 3);

    let json = dir.path().join("report.json");
    let o = run(&[
        "experiment",
        "--synthetic",
        "resources=10,seed=3",
        "--config",
        p(&cfg),
        "--out",
        p(&json),
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(fs::read_to_string(&json).unwrap().contains("\"family\": \"diffeo\""));
}

#[test]
fn experiment_validation_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let cfg = dir.path().join("bad.cfg");
    for body in [
        "runs = 0\n",
        "threshold = 2\n",
        "lambda_grid = [10, 1]\n",
        "colour = red\n",
    ] {
        fs::write(&cfg, body).unwrap();
        let o = run(&[
            "experiment",
            "--synthetic",
            "resources=10",
            "--config",
            p(&cfg),
            "--out",
            p(&out),
        ]);
        assert_eq!(o.status.code(), Some(2), "{body}");
    }
    let o = run(&["experiment", "--synthetic", "coherence=3", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}
