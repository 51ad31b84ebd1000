//! Project reports, cross-project statistics and evaluation against
//! hand-labeled ground truth, with their canonical JSON and text forms.

mod eval;
mod stats;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use eval::{
    evaluate, parse_ground_truth, EvaluationMetrics, GroundTruth, KindMetrics, MetricSummary, TruthEntry, TruthError,
};
pub use stats::{
    co_occurrence, prevalence, statistics, suite_smell_sets, CooccurrenceStats, KindPrevalence, OrderedMap, PrevalenceStats,
    Spread, StatsReport, SuiteSmells,
};
pub use text::{render_evaluation, render_findings, render_stats};

use crate::detectors::{DetectorConfig, SmellFinding, SmellKind};
use crate::diagnostic::Diagnostic;
use crate::model::{ModelConfig, SkipReason, TestProject};

pub const TOOL_NAME: &str = "xnose";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Configuration echoed into every report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub model: ModelConfig,
    pub detectors: DetectorConfig,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityCounts {
    pub suites: usize,
    pub cases: usize,
}

/// Per-kind finding counts. Serializes as a JSON object whose keys are the 16
/// built-in kinds in canonical order followed by any custom kinds by name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Totals(Vec<(String, usize)>);

impl Totals {
    pub fn from_findings(findings: &[SmellFinding]) -> Self {
        let mut counts: BTreeMap<(usize, String), usize> = SmellKind::ALL
            .iter()
            .map(|k| (kind_sort_key(k.name()), 0))
            .collect();
        for f in findings {
            *counts.entry(kind_sort_key(f.kind.name())).or_default() += 1;
        }
        Totals(counts.into_iter().map(|((_, name), n)| (name, n)).collect())
    }

    pub fn get(&self, kind: &str) -> usize {
        self.0.iter().find(|(k, _)| k == kind).map_or(0, |(_, n)| *n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, n)| (k.as_str(), *n))
    }

    pub fn sum(&self) -> usize {
        self.0.iter().map(|(_, n)| n).sum()
    }
}

impl Serialize for Totals {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Totals {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Totals;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map of kind names to counts")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Totals, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, usize>()? {
                    out.push((k, v));
                }
                Ok(Totals(out))
            }
        }
        d.deserialize_map(V)
    }
}

/// Sort key placing built-in kinds first in canonical order, then other names alphabetically.
pub fn kind_sort_key(name: &str) -> (usize, String) {
    let rank = SmellKind::ALL
        .iter()
        .position(|k| k.name() == name)
        .unwrap_or(SmellKind::ALL.len());
    (rank, name.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectReport {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub project: String,
    pub summary: EntityCounts,
    pub findings: Vec<SmellFinding>,
    pub totals: Totals,
    pub diagnostics: Vec<Diagnostic>,
}

impl ProjectReport {
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Builds the report for one scanned project. `project_path` is echoed as
/// given, with `/` separators.
pub fn aggregate(
    project: &TestProject,
    findings: Vec<SmellFinding>,
    tool_diagnostics: Vec<Diagnostic>,
    config: ConfigEcho,
    project_path: &str,
) -> ProjectReport {
    let mut diagnostics = project.diagnostics.clone();
    diagnostics.extend(tool_diagnostics);
    diagnostics.extend(
        project
            .skipped_files
            .iter()
            .filter(|s| s.reason == SkipReason::Unreadable)
            .map(|s| Diagnostic::error(s.path.clone(), 1, 1, "file could not be read")),
    );
    diagnostics.sort();
    diagnostics.dedup();
    ProjectReport {
        tool: TOOL_NAME.to_string(),
        version: TOOL_VERSION.to_string(),
        config,
        project: project_path.replace('\\', "/"),
        summary: EntityCounts {
            suites: project.suites().count(),
            cases: project.cases().count(),
        },
        totals: Totals::from_findings(&findings),
        findings,
        diagnostics,
    }
}

/// Pretty-printed JSON with a trailing newline. Key order follows the type
/// definitions, so equal values always produce identical bytes.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types always serialize");
    out.push('\n');
    out
}

/// Rounds to 6 fractional digits.
pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

pub(crate) fn serialize_fraction<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round6(*x))
}
