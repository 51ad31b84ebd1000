use std::fs;

use xnose::cli::{run_with_env, EXIT_FATAL, EXIT_OK, EXIT_SMELLS};
use xnose::report::ProjectReport;

const CORPUS: &str = "tests/fixtures/corpus";

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, None)
}

fn run_env(args: &[&str], env: Option<&std::path::Path>) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with_env(std::iter::once("xnose").chain(args.iter().copied()), env, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn scan_matches_golden_report() {
    let (code, out, _) = run(&["scan", CORPUS, "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, fs::read_to_string("tests/fixtures/corpus.golden.json").unwrap());
}

#[test]
fn text_format_has_one_line_per_finding() {
    let (code, out, _) = run(&["scan", CORPUS, "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    let golden = ProjectReport::from_json(&fs::read_to_string("tests/fixtures/corpus.golden.json").unwrap()).unwrap();
    assert_eq!(out.lines().count(), golden.findings.len());
    assert!(out
        .lines()
        .any(|l| l == "EmptyTest/NoStatements.cs:8:21 EmptyTest Fixtures.EmptyTest.NoStatements.Placeholder no executable statements"));
}

#[test]
fn fail_on_smell_exits_three() {
    assert_eq!(run(&["scan", CORPUS, "--fail-on-smell"]).0, EXIT_SMELLS);
    assert_eq!(run(&["scan", "tests/fixtures/corpus/EagerTest/SingleCallRepeated.cs", "--fail-on-smell"]).0, EXIT_OK);
}

#[test]
fn missing_path_is_fatal() {
    let (code, out, err) = run(&["scan", "tests/fixtures/does-not-exist"]);
    assert_eq!(code, EXIT_FATAL);
    assert!(out.is_empty());
    assert!(!err.is_empty());
}

#[test]
fn config_file_overrides_defaults_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let strict = dir.path().join("strict.toml");
    fs::write(&strict, "[detectors]\nobscure_setup_threshold = 3\n").unwrap();
    let (code, out, _) = run(&["scan", "tests/fixtures/corpus/ObscureInLineSetup/MultiDeclarators.cs", "--config", strict.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let report = ProjectReport::from_json(&out).unwrap();
    assert_eq!(report.config.detectors.obscure_setup_threshold, 3);
    assert_eq!(report.totals.get("ObscureInLineSetup"), 1);

    // The environment variable is only a fallback for --config.
    let (_, out, _) = run_env(&["scan", "tests/fixtures/corpus/ObscureInLineSetup/MultiDeclarators.cs"], Some(&strict));
    assert_eq!(ProjectReport::from_json(&out).unwrap().totals.get("ObscureInLineSetup"), 1);

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[detectors]\nobscure_treshold = 3\n").unwrap();
    let (code, _, err) = run(&["scan", CORPUS, "--config", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_FATAL);
    assert!(err.contains("obscure_treshold"), "{err}");
}

#[test]
fn eval_rejects_bad_truth_with_entry_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.json");
    fs::write(&pred, fs::read_to_string("tests/fixtures/corpus.golden.json").unwrap()).unwrap();
    let truth = dir.path().join("truth.json");
    fs::write(&truth, r#"[{"file":"a.cs","suite":"S","case":"C","kind":"EmptyTest"},{"file":"a.cs","suite":"S","kind":"Nope"}]"#).unwrap();
    let (code, out, err) = run(&["eval", "--pred", pred.to_str().unwrap(), "--truth", truth.to_str().unwrap()]);
    assert_eq!(code, EXIT_FATAL);
    assert!(out.is_empty());
    assert!(err.contains("[1]"), "{err}");
}

#[test]
fn eval_text_table_lists_every_kind() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.json");
    assert_eq!(run(&["scan", CORPUS, "--out", pred.to_str().unwrap()]).0, EXIT_OK);
    let (code, out, _) = run(&["eval", "--pred", pred.to_str().unwrap(), "--truth", "tests/fixtures/truth.json", "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1 + 16 + 2);
    assert!(out.contains("average (unweighted)"));
}

#[test]
fn stats_needs_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["stats", "--reports", dir.path().to_str().unwrap()]).0, EXIT_FATAL);

    fs::write(dir.path().join("corpus.json"), fs::read_to_string("tests/fixtures/corpus.golden.json").unwrap()).unwrap();
    let (code, out, _) = run(&["stats", "--reports", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let stats: serde_json::Value = serde_json::from_str(&out).unwrap();
    let p = stats["co_occurrence"]["conditional"]["EmptyTest"]["UnknownTest"].as_f64();
    assert_eq!(p, Some(1.0));
    let sum: f64 = stats["co_occurrence"]["histogram"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_f64().unwrap())
        .sum();
    assert!((sum - 1.0).abs() < 1e-5);
}
