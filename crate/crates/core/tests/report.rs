mod common;

use common::synthetic_fd;
use folksograph_core::harness::{emit_report, report_from_csv, report_to_csv, run_experiment, Family, ReportFormat};
use folksograph_core::{ExperimentConfig, ExperimentReport, TableSimilarity};

const GOLDEN: &str = include_str!("data/report_golden.csv");

fn fixture_report() -> ExperimentReport {
    let cfg = ExperimentConfig {
        realizations: 2,
        sample_size: 25,
        runs: 2,
        seed: 42,
        lambda_grid: vec![0.1, 1.0, 10.0, 100.0],
        threshold: 0.05,
        lambda: 1.0,
    };
    run_experiment(&synthetic_fd(10, 0.9, 42), &TableSimilarity::bundled(), &cfg).unwrap()
}

#[test]
fn fixture_report_matches_golden_file() {
    assert_eq!(report_to_csv(&fixture_report()).unwrap(), GOLDEN);
}

#[test]
fn golden_file_parses_back_to_the_same_aggregates() {
    let parsed = report_from_csv(GOLDEN).unwrap();
    let report = fixture_report();
    assert_eq!(parsed.aggregates, report.aggregates);
    assert_eq!(parsed.config, report.config);
    assert_eq!(parsed.rows.len(), 2 * 2 * Family::ALL.len());
}

#[test]
fn json_report_round_trips() {
    let report = fixture_report();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    emit_report(&report, ReportFormat::Json, &path).unwrap();
    let back: ExperimentReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn csv_file_round_trips() {
    let report = fixture_report();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    emit_report(&report, ReportFormat::Csv, &path).unwrap();
    assert_eq!(
        report_from_csv(&std::fs::read_to_string(&path).unwrap()).unwrap(),
        report
    );
}
