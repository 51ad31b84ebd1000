//! Treats every top-level directory of a tree as one project, scans each,
//! and prints prevalence and co-occurrence statistics across them.

use std::path::Path;

use xnose::report::{render_stats, statistics, StatsReport};
use xnose::{scan, ScanOptions};

pub fn run_example(root: &Path) -> StatsReport {
    let mut projects: Vec<_> = std::fs::read_dir(root)
        .expect("readable directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    projects.sort();
    let reports: Vec<_> = projects
        .iter()
        .map(|p| scan(p, &ScanOptions::default()).expect("project can be scanned"))
        .collect();
    statistics(&reports)
}

fn main() {
    let root = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corpus").to_string());
    print!("{}", render_stats(&run_example(Path::new(&root))));
}
