//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the summary is always printed.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;
use xnose::cli::run_with_env;
use xnose::detectors::{DetectorKind, Granularity, SmellFinding, SmellKind};
use xnose::model::ModelConfig;
use xnose::scan::load_project;
use xnose::report::{aggregate, parse_ground_truth, ConfigEcho, ProjectReport};
use xnose::syntax::{tokenize, TokenKind};
use xnose::{scan_source, ScanOptions};

const CORPUS: &str = "tests/fixtures/corpus";
const TRUTH: &str = "tests/fixtures/truth.json";
const GOLDEN: &str = "tests/fixtures/corpus.golden.json";
const MALFORMED: &str = "tests/fixtures/malformed";

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("xnose").chain(args.iter().copied());
    let code = run_with_env(argv, None, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("invalid JSON ({e}): {text}"))
}

fn corpus_files() -> Vec<std::path::PathBuf> {
    walkdir::WalkDir::new(CORPUS)
        .sort_by_file_name()
        .into_iter()
        .map(|e| e.unwrap().into_path())
        .filter(|p| p.extension().is_some_and(|e| e == "cs"))
        .collect()
}

type Identity = (String, String, Option<String>, String);

fn identities(report: &ProjectReport) -> BTreeSet<Identity> {
    report
        .findings
        .iter()
        .map(|f| (f.kind.name().to_string(), f.suite.clone(), f.case.clone(), f.file.clone()))
        .collect()
}

fn finding(kind: &str, suite: &str, case: Option<&str>) -> SmellFinding {
    let kind = DetectorKind::from(kind);
    let granularity = kind.builtin().map_or(Granularity::Case, |k| k.granularity());
    SmellFinding {
        kind,
        granularity,
        file: format!("{suite}.cs"),
        suite: suite.to_string(),
        case: case.map(str::to_string),
        line: 1,
        col: 1,
        evidence: String::new(),
        span: 0..0,
    }
}

fn report_of(findings: Vec<SmellFinding>, suites: usize) -> ProjectReport {
    let mut r = aggregate(&Default::default(), findings, vec![], ConfigEcho::default(), "synthetic");
    r.summary.suites = suites;
    r.summary.cases = suites;
    r
}

// 1
fn corpus_exactness() -> Result<String, String> {
    let files = corpus_files();
    if files.len() < 48 {
        return Err(format!("only {} fixture files", files.len()));
    }
    let truth = parse_ground_truth(&fs::read_to_string(TRUTH).unwrap()).map_err(|e| e.to_string())?;

    // At least two labeled positives per kind, and two unlabeled entities of
    // the right granularity in the directory dedicated to that kind.
    let project = load_project(Path::new(CORPUS), &ModelConfig::default()).map_err(|e| e.to_string())?;
    let mut entities: Vec<(String, String, Option<String>)> = Vec::new();
    for suite in project.suites() {
        entities.push((suite.file.clone(), suite.name.clone(), None));
        entities.extend(suite.cases.iter().map(|c| (suite.file.clone(), suite.name.clone(), Some(c.name.clone()))));
    }
    for kind in SmellKind::ALL {
        let positives = truth.iter().filter(|t| t.kind == kind).count();
        let negatives = entities
            .iter()
            .filter(|(file, _, _)| file.starts_with(&format!("{}/", kind.name())))
            .filter(|(_, _, case)| (kind.granularity() == Granularity::Suite) == case.is_none())
            .filter(|(file, suite, case)| {
                !truth.iter().any(|t| t.kind == kind && &t.file == file && &t.suite == suite && &t.case == case)
            })
            .count();
        if positives < 2 || negatives < 2 {
            return Err(format!("{}: {positives} positives, {negatives} negatives", kind.name()));
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.json");
    let start = Instant::now();
    let scan = cli(&["scan", CORPUS, "--out", pred.to_str().unwrap()]);
    let eval = cli(&["eval", "--pred", pred.to_str().unwrap(), "--truth", TRUTH]);
    let elapsed = start.elapsed();
    if scan.code != 0 || eval.code != 0 {
        return Err(format!("exit codes {} / {}: {}{}", scan.code, eval.code, scan.stderr, eval.stderr));
    }
    let metrics = json(&eval.stdout);
    for row in metrics["kinds"].as_array().unwrap() {
        for key in ["precision", "recall", "f1"] {
            if row[key].as_f64() != Some(1.0) {
                return Err(format!("{} {key} = {}", row["kind"], row[key]));
            }
        }
    }
    let golden = fs::read_to_string(GOLDEN).unwrap();
    if fs::read_to_string(&pred).unwrap() != golden {
        return Err("report differs from the golden report".into());
    }
    if elapsed >= Duration::from_secs(5) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} files, {} labels, P=R=F1=1 for all 16 kinds in {elapsed:.2?}", files.len(), truth.len()))
}

// Per-kind (precision %, recall %) rows of the published validation table.
const VALIDATION_TABLE: [(&str, f64, f64); 16] = [
    ("LackOfCohesion", 77.3, 84.2),
    ("EmptyTest", 100.0, 100.0),
    ("ConditionalTestSmell", 86.0, 100.0),
    ("AssertionRoulette", 100.0, 94.7),
    ("UnknownTest", 100.0, 100.0),
    ("RedundantPrint", 100.0, 100.0),
    ("SleepyTest", 100.0, 100.0),
    ("IgnoredTest", 100.0, 100.0),
    ("RedundantAssertion", 100.0, 100.0),
    ("DuplicateAssert", 95.7, 94.6),
    ("MagicNumber", 100.0, 87.8),
    ("EagerTest", 92.6, 95.3),
    ("InappropriateAssertion", 100.0, 100.0),
    ("SensitiveEquality", 100.0, 80.0),
    ("ConstructorInitialization", 100.0, 100.0),
    ("ObscureInLineSetup", 100.0, 100.0),
];

/// Smallest true-positive count with integer FP and FN that round to the
/// given percentages at one decimal place.
fn counts_for(precision: f64, recall: f64) -> (usize, usize, usize) {
    let close = |x: f64, target: f64| (x * 100.0 - target).abs() < 0.05;
    for tp in 1..10_000usize {
        let fp = (0..=tp).find(|&fp| close(tp as f64 / (tp + fp) as f64, precision));
        let fn_ = (0..=tp).find(|&fn_| close(tp as f64 / (tp + fn_) as f64, recall));
        if let (Some(fp), Some(fn_)) = (fp, fn_) {
            return (tp, fp, fn_);
        }
    }
    unreachable!("no counts for {precision}/{recall}")
}

// 2
fn table_reproduction() -> Result<String, String> {
    let mut findings = Vec::new();
    let mut truth = Vec::new();
    for (kind, p, r) in VALIDATION_TABLE {
        let (tp, fp, fn_) = counts_for(p, r);
        let suite_level = SmellKind::from_name(kind).unwrap().granularity() == Granularity::Suite;
        let entity = |tag: &str, i: usize| -> (String, Option<String>) {
            if suite_level {
                (format!("{kind}{tag}{i}"), None)
            } else {
                ("Suite".to_string(), Some(format!("{kind}{tag}{i}")))
            }
        };
        for i in 0..tp + fp {
            let (suite, case) = entity(if i < tp { "Tp" } else { "Fp" }, i);
            findings.push(finding(kind, &suite, case.as_deref()));
        }
        for i in 0..tp + fn_ {
            let (suite, case) = entity(if i < tp { "Tp" } else { "Fn" }, i);
            truth.push(serde_json::json!({ "file": format!("{suite}.cs"), "suite": suite, "case": case, "kind": kind }));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.json");
    let truth_path = dir.path().join("truth.json");
    fs::write(&pred, report_of(findings, 1).to_json()).unwrap();
    fs::write(&truth_path, serde_json::to_string(&truth).unwrap()).unwrap();
    let out = cli(&["eval", "--pred", pred.to_str().unwrap(), "--truth", truth_path.to_str().unwrap()]);
    if out.code != 0 {
        return Err(out.stderr);
    }
    let m = json(&out.stdout);
    let precision = m["unweighted"]["precision"].as_f64().unwrap() * 100.0;
    let recall = m["unweighted"]["recall"].as_f64().unwrap() * 100.0;
    let loc = m["kinds"].as_array().unwrap().iter().find(|k| k["kind"] == "LackOfCohesion").unwrap();
    let loc_f1 = loc["f1"].as_f64().unwrap() * 100.0;
    let line = format!("unweighted P={precision:.2}% R={recall:.2}%, LackOfCohesion F1={loc_f1:.1}%");
    if (precision - 96.97).abs() <= 0.05 && (recall - 96.03).abs() <= 0.05 && (loc_f1 - 81.0).abs() <= 0.5 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn statement() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(";".to_string()),
        Just("// note".to_string()),
        Just("/* block */".to_string()),
        Just("{ }".to_string()),
        Just("{ ; }".to_string()),
        Just("var a = 1;".to_string()),
        Just("int b;".to_string()),
        Just("Assert.True(flag);".to_string()),
        Just("Assert.Equal(expected, actual, \"message\");".to_string()),
        Just("Record.Exception(() => Run());".to_string()),
        Just("service.Run();".to_string()),
        Just("Helper();".to_string()),
        Just("if (flag) { }".to_string()),
        Just("for (;;) { break; }".to_string()),
        Just("return;".to_string()),
        Just("Console.WriteLine(text);".to_string()),
        Just("Thread.Sleep(10);".to_string()),
        Just("void Local() { Assert.True(flag); }".to_string()),
        Just("x = x + 1;".to_string()),
    ]
}

fn empty_implies_unknown(report: &ProjectReport) -> Result<(), String> {
    let with = |kind: &str| -> BTreeSet<(String, String, Option<String>)> {
        report
            .findings
            .iter()
            .filter(|f| f.kind.name() == kind)
            .map(|f| (f.file.clone(), f.suite.clone(), f.case.clone()))
            .collect()
    };
    let unknown = with("UnknownTest");
    match with("EmptyTest").into_iter().find(|e| !unknown.contains(e)) {
        Some(e) => Err(format!("EmptyTest without UnknownTest: {e:?}")),
        None => Ok(()),
    }
}

// 3
fn empty_implies_unknown_check() -> Result<String, String> {
    let corpus = xnose::scan(Path::new(CORPUS), &ScanOptions::default()).map_err(|e| e.to_string())?;
    empty_implies_unknown(&corpus)?;
    let empties = corpus.totals.get("EmptyTest");

    let mut runner = runner(1000);
    let generated_empty = std::cell::Cell::new(0usize);
    runner
        .run(&proptest::collection::vec(statement(), 0..8), |body| {
            let src = format!(
                "using Xunit;\nclass Gen {{\n  void Helper() {{ }}\n  [Fact]\n  public void Case() {{\n    {}\n  }}\n}}\n",
                body.join("\n    ")
            );
            let report = scan_source("Gen.cs", &src, &ScanOptions::default()).unwrap();
            generated_empty.set(generated_empty.get() + report.totals.get("EmptyTest"));
            empty_implies_unknown(&report).map_err(|e| TestCaseError::fail(format!("{e}\n{src}")))
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "0 counterexamples ({empties} empty corpus cases, {} empty among 1000 generated bodies)",
        generated_empty.get()
    ))
}

// 4
fn threshold_boundaries() -> Result<String, String> {
    let hits = |body: String, kind: &str| -> usize {
        let src = format!("using Xunit;\nclass B {{\n  [Fact]\n  public void Case() {{\n{body}\n  }}\n}}\n");
        scan_source("B.cs", &src, &ScanOptions::default()).unwrap().totals.get(kind)
    };
    let locals = |n: usize| (0..n).map(|i| format!("    var v{i} = input{i};\n")).collect::<String>() + "    Assert.NotNull(v0);";
    let asserts = |n: usize| (0..n).map(|i| format!("    Assert.True(flag{i});\n")).collect::<String>();
    let observed = [
        hits(locals(10), "ObscureInLineSetup"),
        hits(locals(11), "ObscureInLineSetup"),
        hits(asserts(1), "AssertionRoulette"),
        hits(asserts(2), "AssertionRoulette"),
    ];
    let line = format!(
        "10/11 locals -> {}/{} ObscureInLineSetup, 1/2 undocumented assertions -> {}/{} AssertionRoulette",
        observed[0], observed[1], observed[2], observed[3]
    );
    if observed == [0, 1, 0, 1] {
        Ok(line)
    } else {
        Err(line)
    }
}

/// Rewrites the trivia between tokens. `choices[i]` picks what to add to the
/// i-th gap; adjacent `>` tokens stay joined because the parser pairs them.
fn mutate(text: &str, choices: &[u8]) -> String {
    const NOISE: [&str; 5] = ["", " ", "\n\t", " /* noise */ ", " // noise\n"];
    let tokens = tokenize(text).tokens;
    let mut out = String::with_capacity(text.len() * 2);
    let mut last = 0;
    for (i, tok) in tokens.iter().enumerate() {
        let gap = &text[last..tok.span.start];
        out.push_str(gap);
        let glued = gap.is_empty()
            && i > 0
            && tokens[i - 1].kind == TokenKind::Punct
            && &text[tokens[i - 1].span.clone()] == ">"
            && &text[tok.span.clone()] == ">";
        if i > 0 && !glued {
            out.push_str(NOISE[choices.get(i).copied().unwrap_or(0) as usize % NOISE.len()]);
        }
        out.push_str(&text[tok.span.clone()]);
        last = tok.span.end;
    }
    out.push_str(&text[last..]);
    out
}

// 5
fn formatting_invariance() -> Result<String, String> {
    let files = corpus_files();
    let mut runner = runner(4);
    for file in &files {
        let text = fs::read_to_string(file).unwrap();
        let name = file.strip_prefix(CORPUS).unwrap().to_string_lossy().replace('\\', "/");
        let name = name.trim_start_matches('/').to_string();
        let base = identities(&scan_source(&name, &text, &ScanOptions::default()).unwrap());
        runner
            .run(&proptest::collection::vec(any::<u8>(), 0..2000), |choices| {
                let mutated = mutate(&text, &choices);
                let got = identities(&scan_source(&name, &mutated, &ScanOptions::default()).unwrap());
                prop_assert_eq!(&got, &base, "{}\n{}", name, mutated);
                Ok(())
            })
            .map_err(|e| e.to_string())?;
    }
    Ok(format!("{} files x 4 mutations, findings unchanged", files.len()))
}

// 6
fn determinism() -> Result<String, String> {
    let runs = [
        cli(&["scan", CORPUS, "--format", "json"]),
        cli(&["scan", CORPUS, "--format", "json"]),
        cli(&["scan", CORPUS, "--format", "json", "--jobs", "1"]),
        cli(&["scan", CORPUS, "--format", "json", "--jobs", "8"]),
    ];
    if runs.iter().any(|r| r.code != 0) {
        return Err("a scan failed".into());
    }
    if runs.windows(2).all(|w| w[0].stdout == w[1].stdout) {
        Ok(format!("4 runs byte-identical ({} bytes)", runs[0].stdout.len()))
    } else {
        Err("reports differ between runs".into())
    }
}

// 7
fn statistics_oracle() -> Result<String, String> {
    let (a, b) = ("EagerTest", "MagicNumber");
    let findings = vec![
        finding(a, "S1", Some("C")),
        finding(a, "S2", Some("C")),
        finding(b, "S2", Some("D")),
        finding(b, "S3", Some("C")),
    ];
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.json"), report_of(findings, 4).to_json()).unwrap();
    let out = cli(&["stats", "--reports", dir.path().to_str().unwrap()]);
    if out.code != 0 {
        return Err(out.stderr);
    }
    let s = json(&out.stdout);
    let histogram: BTreeMap<String, f64> = serde_json::from_value(s["co_occurrence"]["histogram"].clone()).unwrap();
    let p_b_given_a = s["co_occurrence"]["conditional"][a][b].as_f64();
    let expected: BTreeMap<String, f64> = [("0", 0.25), ("1", 0.5), ("2", 0.25)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let line = format!("histogram {histogram:?}, P(B|A) = {p_b_given_a:?}");
    if histogram == expected && p_b_given_a == Some(0.5) {
        Ok(line)
    } else {
        Err(line)
    }
}

// 8
fn robustness() -> Result<String, String> {
    let out = cli(&["scan", MALFORMED]);
    if out.code != 0 {
        return Err(format!("exit {}", out.code));
    }
    let report = json(&out.stdout);
    let diagnosed = report["diagnostics"].as_array().unwrap().iter().any(|d| d["file"] == "Broken.cs");
    let good = report["findings"].as_array().unwrap().iter().filter(|f| f["file"] == "Good.cs").count();
    if diagnosed && good > 0 && out.stderr.contains("Broken.cs") {
        Ok(format!("exit 0, Broken.cs diagnosed, {good} findings in Good.cs"))
    } else {
        Err(format!("diagnosed={diagnosed}, findings in Good.cs={good}"))
    }
}

type Check = fn() -> Result<String, String>;

/// Seeded so every run explores the same inputs.
fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("fixture corpus exactness", corpus_exactness),
        ("validation table summary", table_reproduction),
        ("EmptyTest implies UnknownTest", empty_implies_unknown_check),
        ("threshold boundaries", threshold_boundaries),
        ("formatting invariance", formatting_invariance),
        ("determinism", determinism),
        ("statistics oracle", statistics_oracle),
        ("malformed input robustness", robustness),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
