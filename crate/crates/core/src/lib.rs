//! Static detection of test smells in C# xUnit test code.
//!
//! The pipeline runs in four stages, each a public module:
//! [`syntax`] parses source into a tolerant concrete syntax tree, [`model`]
//! extracts suites and test cases, [`detectors`] applies the smell rules and
//! [`report`] aggregates, scores and serializes the results. [`scan()`] wires
//! them together; [`cli`] is the command-line front end.

pub mod cli;
pub mod detectors;
pub mod diagnostic;
pub mod model;
pub mod report;
pub mod scan;
pub mod syntax;

pub use diagnostic::Diagnostic;
pub use scan::{scan, scan_source, scan_with, ScanError, ScanOptions};
