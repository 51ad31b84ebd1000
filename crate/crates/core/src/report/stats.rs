use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{kind_sort_key, round6, serialize_fraction, ProjectReport};
use crate::detectors::SmellKind;

/// The smell kinds of one suite. Suites without findings have no name
/// available in a report and carry `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSmells {
    pub project: String,
    pub file: Option<String>,
    pub suite: Option<String>,
    pub kinds: BTreeSet<String>,
}

/// One set per suite: case-level findings lifted to their suite, suite-level
/// findings kept, smell-free suites as empty sets.
pub fn suite_smell_sets(reports: &[ProjectReport]) -> Vec<SuiteSmells> {
    let mut out = Vec::new();
    for r in reports {
        let mut by_suite: BTreeMap<(&str, &str), BTreeSet<String>> = BTreeMap::new();
        for f in &r.findings {
            by_suite
                .entry((f.file.as_str(), f.suite.as_str()))
                .or_default()
                .insert(f.kind.name().to_string());
        }
        let smelly = by_suite.len();
        for ((file, suite), kinds) in by_suite {
            out.push(SuiteSmells {
                project: r.project.clone(),
                file: Some(file.to_string()),
                suite: Some(suite.to_string()),
                kinds,
            });
        }
        for _ in smelly..r.summary.suites {
            out.push(SuiteSmells {
                project: r.project.clone(),
                file: None,
                suite: None,
                kinds: BTreeSet::new(),
            });
        }
    }
    out
}

/// Min, mean and max of a per-project quantity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub min: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub mean: f64,
    pub max: usize,
}

impl Spread {
    fn of(values: impl IntoIterator<Item = usize>) -> Self {
        let values: Vec<_> = values.into_iter().collect();
        if values.is_empty() {
            return Self::default();
        }
        Self {
            min: *values.iter().min().unwrap_or(&0),
            mean: values.iter().sum::<usize>() as f64 / values.len() as f64,
            max: *values.iter().max().unwrap_or(&0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindPrevalence {
    pub kind: String,
    pub smelly_suites: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub suite_fraction: f64,
    pub smelly_projects: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub project_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceStats {
    pub projects: usize,
    pub suites: usize,
    pub cases: usize,
    pub kinds: Vec<KindPrevalence>,
    pub suites_per_project: Spread,
    pub cases_per_project: Spread,
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

fn kinds_in_order<'a>(extra: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut kinds: BTreeSet<(usize, String)> = SmellKind::ALL.iter().map(|k| kind_sort_key(k.name())).collect();
    kinds.extend(extra.map(kind_sort_key));
    kinds.into_iter().map(|(_, k)| k).collect()
}

pub fn prevalence(reports: &[ProjectReport]) -> PrevalenceStats {
    let sets = suite_smell_sets(reports);
    let kinds = kinds_in_order(sets.iter().flat_map(|s| s.kinds.iter().map(String::as_str)));
    let kinds = kinds
        .into_iter()
        .map(|kind| {
            let smelly_suites = sets.iter().filter(|s| s.kinds.contains(&kind)).count();
            let smelly_projects = reports
                .iter()
                .filter(|r| r.findings.iter().any(|f| f.kind.name() == kind))
                .count();
            KindPrevalence {
                smelly_suites,
                suite_fraction: ratio(smelly_suites, sets.len()),
                smelly_projects,
                project_fraction: ratio(smelly_projects, reports.len()),
                kind,
            }
        })
        .collect();
    PrevalenceStats {
        projects: reports.len(),
        suites: sets.len(),
        cases: reports.iter().map(|r| r.summary.cases).sum(),
        kinds,
        suites_per_project: Spread::of(reports.iter().map(|r| r.summary.suites)),
        cases_per_project: Spread::of(reports.iter().map(|r| r.summary.cases)),
    }
}

/// A string-keyed map that keeps insertion order when serialized.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OrderedMap<V>(pub Vec<(String, V)>);

impl<V> OrderedMap<V> {
    pub fn get(&self, key: &str) -> Option<&V> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &V)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }
}

impl<V: Serialize> Serialize for OrderedMap<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for OrderedMap<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Vis<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for Vis<V> {
            type Value = OrderedMap<V>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = map.next_entry()? {
                    out.push(entry);
                }
                Ok(OrderedMap(out))
            }
        }
        d.deserialize_map(Vis(PhantomData))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceStats {
    pub suites: usize,
    /// Fraction of suites with exactly `k` distinct smell kinds, for every k up to the maximum seen.
    pub histogram: OrderedMap<f64>,
    /// `conditional[X][Y]`: fraction of suites with X that also have Y.
    pub conditional: OrderedMap<OrderedMap<f64>>,
    /// `joint[X][Y]`: number of suites with both X and Y.
    pub joint: OrderedMap<OrderedMap<usize>>,
}

pub fn co_occurrence(reports: &[ProjectReport]) -> CooccurrenceStats {
    let sets = suite_smell_sets(reports);
    let max_k = sets.iter().map(|s| s.kinds.len()).max();
    let histogram = match max_k {
        Some(max_k) => OrderedMap(
            (0..=max_k)
                .map(|k| {
                    let n = sets.iter().filter(|s| s.kinds.len() == k).count();
                    (k.to_string(), round6(ratio(n, sets.len())))
                })
                .collect(),
        ),
        None => OrderedMap::default(),
    };
    let present: BTreeSet<(usize, String)> = sets
        .iter()
        .flat_map(|s| s.kinds.iter().map(|k| kind_sort_key(k)))
        .collect();
    let present: Vec<String> = present.into_iter().map(|(_, k)| k).collect();
    let mut conditional = Vec::new();
    let mut joint = Vec::new();
    for x in &present {
        let with_x: Vec<_> = sets.iter().filter(|s| s.kinds.contains(x)).collect();
        let mut cond_row = Vec::new();
        let mut joint_row = Vec::new();
        for y in &present {
            let both = with_x.iter().filter(|s| s.kinds.contains(y)).count();
            cond_row.push((y.clone(), round6(ratio(both, with_x.len()))));
            joint_row.push((y.clone(), both));
        }
        conditional.push((x.clone(), OrderedMap(cond_row)));
        joint.push((x.clone(), OrderedMap(joint_row)));
    }
    CooccurrenceStats {
        suites: sets.len(),
        histogram,
        conditional: OrderedMap(conditional),
        joint: OrderedMap(joint),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub reports: usize,
    pub prevalence: PrevalenceStats,
    pub co_occurrence: CooccurrenceStats,
}

pub fn statistics(reports: &[ProjectReport]) -> StatsReport {
    StatsReport {
        reports: reports.len(),
        prevalence: prevalence(reports),
        co_occurrence: co_occurrence(reports),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{DetectorKind, Granularity, SmellFinding};
    use crate::report::{aggregate, ConfigEcho};
    use crate::model::TestProject;

    pub(crate) fn synthetic(project: &str, suites: &[&[&str]]) -> ProjectReport {
        let mut findings = Vec::new();
        for (i, kinds) in suites.iter().enumerate() {
            for k in *kinds {
                findings.push(SmellFinding {
                    kind: DetectorKind::from(*k),
                    granularity: Granularity::Case,
                    file: format!("f{i}.cs"),
                    suite: format!("S{i}"),
                    case: Some("C".into()),
                    line: 1,
                    col: 1,
                    evidence: String::new(),
                    span: 0..0,
                });
            }
        }
        let mut r = aggregate(&TestProject::default(), findings, vec![], ConfigEcho::default(), project);
        r.summary.suites = suites.len();
        r.summary.cases = suites.len();
        r
    }

    #[test]
    fn four_suite_oracle() {
        let r = synthetic("p", &[&["EagerTest"], &["EagerTest", "MagicNumber"], &["MagicNumber"], &[]]);
        let c = co_occurrence(&[r]);
        let h: Vec<_> = c.histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        assert_eq!(h, [("0".to_string(), 0.25), ("1".to_string(), 0.5), ("2".to_string(), 0.25)]);
        let p = c.conditional.get("EagerTest").unwrap().get("MagicNumber").unwrap();
        assert_eq!(*p, 0.5);
        assert_eq!(*c.conditional.get("EagerTest").unwrap().get("EagerTest").unwrap(), 1.0);
    }

    #[test]
    fn smell_free_suites() {
        let r = synthetic("p", &[&[], &[]]);
        let c = co_occurrence(std::slice::from_ref(&r));
        assert_eq!(c.histogram.0, [("0".to_string(), 1.0)]);
        assert!(c.conditional.is_empty());
        let p = prevalence(&[r]);
        assert!(p.kinds.iter().all(|k| k.suite_fraction == 0.0 && k.project_fraction == 0.0));
    }

    #[test]
    fn prevalence_fractions() {
        let r = synthetic("p", &[&["EagerTest"], &[]]);
        let q = synthetic("q", &[&[]]);
        let p = prevalence(&[r, q]);
        let eager = p.kinds.iter().find(|k| k.kind == "EagerTest").unwrap();
        assert!((eager.suite_fraction - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(eager.project_fraction, 0.5);
        assert_eq!((p.suites_per_project.min, p.suites_per_project.max), (1, 2));
        assert_eq!(p.suites_per_project.mean, 1.5);
    }
}
