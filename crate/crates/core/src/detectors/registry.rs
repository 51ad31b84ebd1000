use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;

use super::rules::{case_rule, suite_rule};
use super::{DetectorConfig, DetectorKind, Evidence, Granularity, SmellFinding, SmellKind};
use crate::diagnostic::Diagnostic;
use crate::model::{TestCase, TestProject, TestSuite};

/// A smell detector. Case-level detectors implement `detect_case`,
/// suite-level ones `detect_suite`; the other method is never called.
pub trait Detector: Send + Sync {
    fn kind(&self) -> DetectorKind;

    fn granularity(&self) -> Granularity;

    fn detect_case(&self, _case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
        None
    }

    fn detect_suite(&self, _suite: &TestSuite, _cfg: &DetectorConfig) -> Option<Evidence> {
        None
    }
}

struct Builtin(SmellKind);

impl Detector for Builtin {
    fn kind(&self) -> DetectorKind {
        DetectorKind::Builtin(self.0)
    }

    fn granularity(&self) -> Granularity {
        self.0.granularity()
    }

    fn detect_case(&self, case: &TestCase, cfg: &DetectorConfig) -> Option<Evidence> {
        case_rule(self.0, case, cfg)
    }

    fn detect_suite(&self, suite: &TestSuite, cfg: &DetectorConfig) -> Option<Evidence> {
        suite_rule(self.0, suite, cfg)
    }
}

type CaseFn = dyn Fn(&TestCase, &DetectorConfig) -> Option<Evidence> + Send + Sync;
type SuiteFn = dyn Fn(&TestSuite, &DetectorConfig) -> Option<Evidence> + Send + Sync;

enum Predicate {
    Case(Box<CaseFn>),
    Suite(Box<SuiteFn>),
}

/// A detector built from a closure.
pub struct FnDetector {
    name: String,
    predicate: Predicate,
}

impl FnDetector {
    pub fn case<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&TestCase, &DetectorConfig) -> Option<Evidence> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            predicate: Predicate::Case(Box::new(f)),
        }
    }

    pub fn suite<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&TestSuite, &DetectorConfig) -> Option<Evidence> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            predicate: Predicate::Suite(Box::new(f)),
        }
    }
}

impl Detector for FnDetector {
    fn kind(&self) -> DetectorKind {
        DetectorKind::Custom(self.name.clone())
    }

    fn granularity(&self) -> Granularity {
        match self.predicate {
            Predicate::Case(_) => Granularity::Case,
            Predicate::Suite(_) => Granularity::Suite,
        }
    }

    fn detect_case(&self, case: &TestCase, cfg: &DetectorConfig) -> Option<Evidence> {
        match &self.predicate {
            Predicate::Case(f) => f(case, cfg),
            Predicate::Suite(_) => None,
        }
    }

    fn detect_suite(&self, suite: &TestSuite, cfg: &DetectorConfig) -> Option<Evidence> {
        match &self.predicate {
            Predicate::Suite(f) => f(suite, cfg),
            Predicate::Case(_) => None,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("a detector named {0:?} is already registered")]
    Duplicate(String),
    #[error("detector name must be a non-empty identifier, got {0:?}")]
    InvalidName(String),
}

/// The ordered set of detectors a scan runs.
pub struct DetectorRegistry {
    detectors: Vec<Box<dyn Detector>>,
}

impl Default for DetectorRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl DetectorRegistry {
    /// The 16 built-in detectors in canonical order.
    pub fn builtin() -> Self {
        Self {
            detectors: SmellKind::ALL
                .into_iter()
                .map(|k| Box::new(Builtin(k)) as Box<dyn Detector>)
                .collect(),
        }
    }

    pub fn empty() -> Self {
        Self { detectors: Vec::new() }
    }

    /// Appends a detector. Names must be unique across the registry.
    pub fn register(&mut self, detector: impl Detector + 'static) -> Result<(), RegistryError> {
        let kind = detector.kind();
        let name = kind.name();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
            return Err(RegistryError::InvalidName(name.to_string()));
        }
        if self.detectors.iter().any(|d| d.kind().name() == name) {
            return Err(RegistryError::Duplicate(name.to_string()));
        }
        self.detectors.push(Box::new(detector));
        Ok(())
    }

    pub fn kinds(&self) -> Vec<DetectorKind> {
        self.detectors.iter().map(|d| d.kind()).collect()
    }

    pub fn len(&self) -> usize {
        self.detectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Detector> {
        self.detectors.iter().map(|d| d.as_ref())
    }
}

/// Findings of one [`detect_all`] run plus diagnostics for detectors that failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Detection {
    pub findings: Vec<SmellFinding>,
    pub diagnostics: Vec<Diagnostic>,
}

enum Outcome {
    Found(SmellFinding),
    Failed(Diagnostic),
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".to_string())
}

fn run_suite(suite: &TestSuite, registry: &DetectorRegistry, cfg: &DetectorConfig) -> Vec<Outcome> {
    let source = suite.declaration.tree().source();
    let mut out = Vec::new();
    for det in registry.iter() {
        let kind = det.kind();
        let mut guarded = |span_start: usize, label: String, f: &mut dyn FnMut() -> Option<SmellFinding>| {
            match catch_unwind(AssertUnwindSafe(f)) {
                Ok(Some(finding)) => out.push(Outcome::Found(finding)),
                Ok(None) => {}
                Err(payload) => {
                    let (line, col) = source.line_col(span_start);
                    out.push(Outcome::Failed(Diagnostic::warning(
                        suite.file.clone(),
                        line,
                        col,
                        format!("detector {kind} failed on {label}: {}", panic_message(payload.as_ref())),
                    )));
                }
            }
        };
        match det.granularity() {
            Granularity::Suite => guarded(suite.span.start, suite.name.clone(), &mut || {
                det.detect_suite(suite, cfg)
                    .map(|e| SmellFinding::for_suite(kind.clone(), suite, e))
            }),
            Granularity::Case => {
                for case in &suite.cases {
                    guarded(case.span.start, format!("{}.{}", suite.name, case.name), &mut || {
                        det.detect_case(case, cfg)
                            .map(|e| SmellFinding::for_case(kind.clone(), case, e))
                    });
                }
            }
        }
    }
    out
}

/// Runs every registered detector over every suite or case of `project`.
/// Findings are sorted by file, evidence position and kind name. A detector
/// that panics is reported as a diagnostic and the scan goes on.
pub fn detect_all(project: &TestProject, registry: &DetectorRegistry, cfg: &DetectorConfig) -> Detection {
    let suites: Vec<&TestSuite> = project.suites().collect();
    let outcomes: Vec<Vec<Outcome>> = suites.par_iter().map(|s| run_suite(s, registry, cfg)).collect();
    let mut detection = Detection::default();
    for outcome in outcomes.into_iter().flatten() {
        match outcome {
            Outcome::Found(f) => detection.findings.push(f),
            Outcome::Failed(d) => detection.diagnostics.push(d),
        }
    }
    detection.findings.sort_by(|a, b| {
        (&a.file, a.span.start, a.kind.name(), &a.suite, &a.case).cmp(&(&b.file, b.span.start, b.kind.name(), &b.suite, &b.case))
    });
    detection.diagnostics.sort();
    debug_assert!(at_most_one_per_target(&detection.findings));
    detection
}

fn at_most_one_per_target(findings: &[SmellFinding]) -> bool {
    let mut seen = BTreeSet::new();
    findings
        .iter()
        .all(|f| seen.insert((f.kind.name().to_string(), &f.file, &f.suite, &f.case, f.span.start)))
}
