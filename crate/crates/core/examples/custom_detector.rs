//! Registers a project-specific detector next to the built-in ones. The
//! detector flags test cases whose names lack the `Method_Expectation` shape.

use std::path::Path;

use xnose::detectors::{DetectorRegistry, Evidence, FnDetector};
use xnose::report::render_findings;
use xnose::{scan_with, ScanOptions};

pub fn registry() -> DetectorRegistry {
    let mut registry = DetectorRegistry::builtin();
    registry
        .register(FnDetector::case("UnstructuredName", |case, _cfg| {
            (!case.name.contains('_')).then(|| Evidence::new(case.span.clone(), format!("{} has no `_` separator", case.name)))
        }))
        .expect("name is unique");
    registry
}

pub fn run_example(root: &Path) -> String {
    let report = scan_with(root, &ScanOptions::default(), &registry()).expect("directory can be scanned");
    let mut out = render_findings(&report);
    out.push_str(&format!("UnstructuredName total: {}\n", report.totals.get("UnstructuredName")));
    out
}

fn main() {
    let root = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/malformed").to_string());
    print!("{}", run_example(Path::new(&root)));
}
