//! Scans the fixture corpus and scores the findings against its hand labels.

use std::path::Path;

use xnose::report::{evaluate, parse_ground_truth, render_evaluation, EvaluationMetrics};
use xnose::{scan, ScanOptions};

pub fn run_example(corpus: &Path, truth: &Path) -> (EvaluationMetrics, String) {
    let report = scan(corpus, &ScanOptions::default()).expect("corpus can be scanned");
    let text = std::fs::read_to_string(truth).expect("truth file exists");
    let truth = parse_ground_truth(&text).expect("truth file is well formed");
    let metrics = evaluate(&report.findings, &truth);
    let table = render_evaluation(&metrics);
    (metrics, table)
}

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let (_, table) = run_example(&fixtures.join("corpus"), &fixtures.join("truth.json"));
    print!("{table}");
}
