use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{kind_sort_key, serialize_fraction};
use crate::detectors::{SmellFinding, SmellKind};

/// One hand-labeled smell: `case` is `None` for suite-level kinds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthEntry {
    pub file: String,
    pub suite: String,
    #[serde(default)]
    pub case: Option<String>,
    pub kind: SmellKind,
}

pub type GroundTruth = Vec<TruthEntry>;

#[derive(Debug, thiserror::Error)]
pub enum TruthError {
    #[error("ground truth is not a JSON array: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ground truth entry [{index}]: {message}")]
    Entry { index: usize, message: String },
}

/// Parses ground-truth JSON, naming the first offending entry on error.
pub fn parse_ground_truth(text: &str) -> Result<GroundTruth, TruthError> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text)?;
    raw.into_iter()
        .enumerate()
        .map(|(index, v)| {
            serde_json::from_value(v).map_err(|e| TruthError::Entry {
                index,
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindMetrics {
    pub kind: String,
    pub instances: usize,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub precision: f64,
    #[serde(serialize_with = "serialize_fraction")]
    pub recall: f64,
    #[serde(serialize_with = "serialize_fraction")]
    pub f1: f64,
}

fn ratio_or_one(n: usize, d: usize) -> f64 {
    if d == 0 {
        1.0
    } else {
        n as f64 / d as f64
    }
}

impl KindMetrics {
    /// Metrics from raw counts; 0/0 precision or recall counts as 1.
    pub fn from_counts(kind: impl Into<String>, tp: usize, fp: usize, fn_: usize) -> Self {
        let precision = ratio_or_one(tp, tp + fp);
        let recall = ratio_or_one(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Self {
            kind: kind.into(),
            instances: tp + fn_,
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    /// Number of kinds averaged over.
    pub kinds: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub precision: f64,
    #[serde(serialize_with = "serialize_fraction")]
    pub recall: f64,
    #[serde(serialize_with = "serialize_fraction")]
    pub f1: f64,
}

impl MetricSummary {
    /// Plain mean over kinds with at least one instance.
    pub fn unweighted(rows: &[KindMetrics]) -> Option<Self> {
        Self::weighted_by(rows, |_| 1.0)
    }

    /// Mean over kinds with at least one instance, weighted by instance count.
    pub fn instance_weighted(rows: &[KindMetrics]) -> Option<Self> {
        Self::weighted_by(rows, |r| r.instances as f64)
    }

    fn weighted_by(rows: &[KindMetrics], weight: impl Fn(&KindMetrics) -> f64) -> Option<Self> {
        let rows: Vec<_> = rows.iter().filter(|r| r.instances > 0).collect();
        if rows.is_empty() {
            return None;
        }
        let total: f64 = rows.iter().map(|r| weight(r)).sum();
        let mean = |f: fn(&KindMetrics) -> f64| rows.iter().map(|r| weight(r) * f(r)).sum::<f64>() / total;
        Some(Self {
            kinds: rows.len(),
            precision: mean(|r| r.precision),
            recall: mean(|r| r.recall),
            f1: mean(|r| r.f1),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationMetrics {
    pub kinds: Vec<KindMetrics>,
    pub unweighted: Option<MetricSummary>,
    pub weighted: Option<MetricSummary>,
    /// Truth entries naming files absent from the predictions.
    pub diagnostics: Vec<String>,
}

impl EvaluationMetrics {
    pub fn from_rows(kinds: Vec<KindMetrics>) -> Self {
        Self {
            unweighted: MetricSummary::unweighted(&kinds),
            weighted: MetricSummary::instance_weighted(&kinds),
            kinds,
            diagnostics: Vec::new(),
        }
    }

    pub fn kind(&self, name: &str) -> Option<&KindMetrics> {
        self.kinds.iter().find(|k| k.kind == name)
    }
}

type Key<'a> = (&'a str, &'a str, &'a str, Option<&'a str>);

/// Scores findings against ground truth. Matching is exact on
/// (kind, file, suite, case); evidence positions are ignored.
pub fn evaluate(findings: &[SmellFinding], truth: &[TruthEntry]) -> EvaluationMetrics {
    let predicted: BTreeSet<Key> = findings
        .iter()
        .map(|f| (f.kind.name(), f.file.as_str(), f.suite.as_str(), f.case.as_deref()))
        .collect();
    let expected: BTreeSet<Key> = truth
        .iter()
        .map(|t| (t.kind.name(), t.file.as_str(), t.suite.as_str(), t.case.as_deref()))
        .collect();

    let mut kinds: BTreeSet<(usize, String)> = SmellKind::ALL.iter().map(|k| kind_sort_key(k.name())).collect();
    kinds.extend(predicted.iter().map(|k| kind_sort_key(k.0)));
    let rows = kinds
        .into_iter()
        .map(|(_, kind)| {
            let p: BTreeSet<_> = predicted.iter().filter(|k| k.0 == kind).collect();
            let t: BTreeSet<_> = expected.iter().filter(|k| k.0 == kind).collect();
            let tp = p.intersection(&t).count();
            KindMetrics::from_counts(kind, tp, p.len() - tp, t.len() - tp)
        })
        .collect();

    let predicted_files: BTreeSet<&str> = findings.iter().map(|f| f.file.as_str()).collect();
    let unmatched: BTreeSet<&str> = truth
        .iter()
        .map(|t| t.file.as_str())
        .filter(|f| !predicted_files.contains(f))
        .collect();
    let mut metrics = EvaluationMetrics::from_rows(rows);
    metrics.diagnostics = unmatched
        .into_iter()
        .map(|f| format!("ground truth names {f}, which has no predicted findings; its entries count as false negatives"))
        .collect();
    metrics
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{DetectorKind, Granularity};

    fn f(kind: SmellKind, file: &str, case: &str) -> SmellFinding {
        SmellFinding {
            kind: DetectorKind::Builtin(kind),
            granularity: Granularity::Case,
            file: file.into(),
            suite: "S".into(),
            case: Some(case.into()),
            line: 1,
            col: 1,
            evidence: String::new(),
            span: 0..0,
        }
    }

    fn t(kind: SmellKind, file: &str, case: &str) -> TruthEntry {
        TruthEntry {
            file: file.into(),
            suite: "S".into(),
            case: Some(case.into()),
            kind,
        }
    }

    #[test]
    fn identity_gives_all_ones() {
        let fs = vec![f(SmellKind::EagerTest, "a.cs", "A"), f(SmellKind::EmptyTest, "a.cs", "B")];
        let truth: Vec<_> = fs.iter().map(|x| t(x.kind.builtin().unwrap(), &x.file, x.case.as_deref().unwrap())).collect();
        let m = evaluate(&fs, &truth);
        assert!(m.kinds.iter().all(|k| k.precision == 1.0 && k.recall == 1.0 && k.f1 == 1.0));
        assert_eq!(m.unweighted.unwrap().kinds, 2);
        assert!(m.diagnostics.is_empty());
    }

    #[test]
    fn three_one_one() {
        let k = SmellKind::MagicNumber;
        let fs: Vec<_> = ["A", "B", "C", "X"].iter().map(|c| f(k, "a.cs", c)).collect();
        let truth: Vec<_> = ["A", "B", "C", "Y"].iter().map(|c| t(k, "a.cs", c)).collect();
        let m = evaluate(&fs, &truth);
        let row = m.kind("MagicNumber").unwrap();
        assert_eq!((row.tp, row.fp, row.fn_), (3, 1, 1));
        assert_eq!((row.precision, row.recall, row.f1), (0.75, 0.75, 0.75));
    }

    #[test]
    fn zero_denominators_and_unknown_files() {
        let m = evaluate(&[], &[t(SmellKind::EmptyTest, "gone.cs", "A")]);
        let row = m.kind("EmptyTest").unwrap();
        assert_eq!((row.precision, row.recall, row.f1), (1.0, 0.0, 0.0));
        assert_eq!(m.diagnostics.len(), 1);
        assert!(evaluate(&[], &[]).unweighted.is_none());
        assert_eq!(KindMetrics::from_counts("K", 0, 0, 0).f1, 1.0);
    }

    #[test]
    fn truth_schema_errors_name_the_entry() {
        let ok = parse_ground_truth(r#"[{"file":"a.cs","suite":"S","case":null,"kind":"LackOfCohesion"}]"#).unwrap();
        assert_eq!(ok[0].case, None);
        let err = parse_ground_truth(r#"[{"file":"a.cs","suite":"S","case":"A","kind":"EmptyTest"},{"file":"a.cs","suite":"S","case":"A","kind":"Smelly"}]"#)
            .unwrap_err();
        assert!(err.to_string().contains("[1]"), "{err}");
        assert!(parse_ground_truth("{}").is_err());
    }

    #[test]
    fn weighted_versus_unweighted() {
        let rows = vec![KindMetrics::from_counts("A", 1, 1, 0), KindMetrics::from_counts("B", 3, 0, 0)];
        let u = MetricSummary::unweighted(&rows).unwrap();
        let w = MetricSummary::instance_weighted(&rows).unwrap();
        assert_eq!(u.precision, 0.75);
        assert_eq!(w.precision, (0.5 + 3.0) / 4.0);
    }
}
