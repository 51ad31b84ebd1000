//! The end-to-end scan: discover, parse, model, detect, report.

use std::path::Path;

use rayon::prelude::*;

use crate::detectors::{detect_all, DetectorConfig, DetectorRegistry};
use crate::model::{build_test_model, discover_test_files, ModelConfig, ParsedFile, TestProject};
use crate::report::{aggregate, ConfigEcho, ProjectReport};
use crate::syntax::{parse_bytes, parse_text};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanOptions {
    pub model: ModelConfig,
    pub detectors: DetectorConfig,
    /// Worker threads; `None` uses the global pool. Never affects output.
    pub jobs: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Discovers and parses the test files under `root` and builds the test model.
pub fn load_project(root: &Path, model: &ModelConfig) -> Result<TestProject, ScanError> {
    let discovery = discover_test_files(root).map_err(|source| ScanError::Io {
        path: root.display().to_string(),
        source,
    })?;
    let parsed: Vec<ParsedFile> = discovery
        .candidates
        .into_par_iter()
        .map(|c| {
            let (tree, diagnostics) = parse_bytes(c.path.clone(), c.bytes);
            ParsedFile {
                path: c.path,
                tree,
                diagnostics,
            }
        })
        .collect();
    let mut project = build_test_model(root, parsed, model);
    project.skipped_files.extend(discovery.skipped);
    project.skipped_files.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(project)
}

/// Runs the built-in detectors over one in-memory source file. `path` is
/// used only for naming; nothing is read from disk.
pub fn scan_source(path: &str, text: &str, options: &ScanOptions) -> Result<ProjectReport, ScanError> {
    options.detectors.validate().map_err(ScanError::Config)?;
    let (tree, diagnostics) = parse_text(path, text);
    let parsed = vec![ParsedFile {
        path: path.to_string(),
        tree,
        diagnostics,
    }];
    let project = build_test_model(path, parsed, &options.model);
    let detection = detect_all(&project, &DetectorRegistry::builtin(), &options.detectors);
    let echo = ConfigEcho {
        model: options.model.clone(),
        detectors: options.detectors.clone(),
    };
    Ok(aggregate(&project, detection.findings, detection.diagnostics, echo, path))
}

/// Scans `root` with the built-in detectors.
pub fn scan(root: &Path, options: &ScanOptions) -> Result<ProjectReport, ScanError> {
    scan_with(root, options, &DetectorRegistry::builtin())
}

/// Scans `root` with the detectors of `registry`.
pub fn scan_with(root: &Path, options: &ScanOptions, registry: &DetectorRegistry) -> Result<ProjectReport, ScanError> {
    options.detectors.validate().map_err(ScanError::Config)?;
    let run = || -> Result<ProjectReport, ScanError> {
        let project = load_project(root, &options.model)?;
        let detection = detect_all(&project, registry, &options.detectors);
        let echo = ConfigEcho {
            model: options.model.clone(),
            detectors: options.detectors.clone(),
        };
        Ok(aggregate(
            &project,
            detection.findings,
            detection.diagnostics,
            echo,
            &root.to_string_lossy(),
        ))
    };
    match options.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()?.install(run),
        None => run(),
    }
}
