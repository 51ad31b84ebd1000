//! Runs every example's entry point so the examples cannot rot.

use std::path::Path;

#[allow(dead_code)]
#[path = "../examples/parse_tree.rs"]
mod parse_tree;
#[allow(dead_code)]
#[path = "../examples/detect_snippet.rs"]
mod detect_snippet;
#[allow(dead_code)]
#[path = "../examples/scan_directory.rs"]
mod scan_directory;
#[allow(dead_code)]
#[path = "../examples/custom_detector.rs"]
mod custom_detector;
#[allow(dead_code)]
#[path = "../examples/evaluate_ground_truth.rs"]
mod evaluate_ground_truth;
#[allow(dead_code)]
#[path = "../examples/corpus_statistics.rs"]
mod corpus_statistics;

const FIXTURES: &str = "tests/fixtures";

#[test]
fn parse_tree_outlines_the_method() {
    let out = parse_tree::run_example("T.cs", "class T { [Fact] void M() { Assert.True(x); } }");
    assert!(out.starts_with("CompilationUnit"));
    assert!(out.contains("MethodDeclaration"));
    assert!(!out.contains("diagnostic"));
}

#[test]
fn detect_snippet_finds_the_planted_smells() {
    let out = detect_snippet::run_example();
    for kind in ["EagerTest", "SleepyTest", "RedundantPrint", "MagicNumber", "InappropriateAssertion", "EmptyTest", "UnknownTest"] {
        assert!(out.contains(kind), "{kind} missing from\n{out}");
    }
}

#[test]
fn scan_directory_is_independent_of_jobs() {
    let corpus = Path::new(FIXTURES).join("corpus");
    let one = scan_directory::run_example(&corpus, Some(1));
    assert_eq!(one, scan_directory::run_example(&corpus, Some(4)));
    assert!(one.contains("59 suites"), "{one}");
}

#[test]
fn custom_detector_reports_beside_builtins() {
    let out = custom_detector::run_example(&Path::new(FIXTURES).join("malformed"));
    assert!(out.contains("UnstructuredName Fixtures.Malformed.Broken.Unterminated"));
    assert!(out.ends_with("UnstructuredName total: 1\n"));
    assert!(custom_detector::registry().len() == 17);
}

#[test]
fn evaluate_ground_truth_is_exact_on_the_corpus() {
    let fixtures = Path::new(FIXTURES);
    let (metrics, table) = evaluate_ground_truth::run_example(&fixtures.join("corpus"), &fixtures.join("truth.json"));
    assert!(metrics.kinds.iter().all(|k| k.f1 == 1.0));
    assert!(table.contains("average (unweighted)"));
}

#[test]
fn corpus_statistics_treats_directories_as_projects() {
    let stats = corpus_statistics::run_example(&Path::new(FIXTURES).join("corpus"));
    assert_eq!(stats.reports, 17);
    assert_eq!(stats.prevalence.suites, 59);
    let sum: f64 = stats.co_occurrence.histogram.iter().map(|(_, v)| v).sum();
    assert!((sum - 1.0).abs() < 1e-5);
    let empty_then_unknown = stats.co_occurrence.conditional.get("EmptyTest").and_then(|r| r.get("UnknownTest"));
    assert_eq!(empty_then_unknown, Some(&1.0));
}
