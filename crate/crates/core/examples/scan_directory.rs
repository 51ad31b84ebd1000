//! Scans a directory tree and prints per-kind totals plus any diagnostics.
//!
//! `cargo run --example scan_directory [DIR] [--jobs N]`

use std::path::{Path, PathBuf};

use xnose::{scan, ScanOptions};

pub fn run_example(root: &Path, jobs: Option<usize>) -> String {
    let options = ScanOptions { jobs, ..ScanOptions::default() };
    let report = scan(root, &options).expect("directory can be scanned");
    let mut out = format!(
        "{}: {} suites, {} cases, {} findings\n",
        report.project,
        report.summary.suites,
        report.summary.cases,
        report.findings.len()
    );
    for (kind, n) in report.totals.iter().filter(|(_, n)| *n > 0) {
        out.push_str(&format!("  {kind:<26} {n}\n"));
    }
    for d in &report.diagnostics {
        out.push_str(&format!("  {d}\n"));
    }
    out
}

fn main() {
    let mut args = std::env::args().skip(1);
    let mut root = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corpus"));
    let mut jobs = None;
    while let Some(arg) = args.next() {
        if arg == "--jobs" {
            jobs = args.next().and_then(|n| n.parse().ok());
        } else {
            root = PathBuf::from(arg);
        }
    }
    print!("{}", run_example(&root, jobs));
}
