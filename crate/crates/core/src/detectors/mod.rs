//! Smell detectors. Each built-in rule is a pure function of one case or
//! suite plus [`DetectorConfig`]; [`DetectorRegistry`] holds the set that
//! [`detect_all`] runs.

mod cohesion;
mod registry;
mod rules;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use cohesion::{case_terms, cosine_similarity, mean_pairwise_similarity, split_identifier, TermVector};
pub use registry::{detect_all, Detection, Detector, DetectorRegistry, FnDetector, RegistryError};
pub use rules::*;

use crate::model::{TestCase, TestSuite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SmellKind {
    LackOfCohesion,
    EmptyTest,
    ConditionalTestSmell,
    AssertionRoulette,
    UnknownTest,
    RedundantPrint,
    SleepyTest,
    IgnoredTest,
    RedundantAssertion,
    DuplicateAssert,
    MagicNumber,
    EagerTest,
    InappropriateAssertion,
    SensitiveEquality,
    ConstructorInitialization,
    ObscureInLineSetup,
}

impl SmellKind {
    /// All kinds, in canonical order.
    pub const ALL: [SmellKind; 16] = [
        SmellKind::LackOfCohesion,
        SmellKind::EmptyTest,
        SmellKind::ConditionalTestSmell,
        SmellKind::AssertionRoulette,
        SmellKind::UnknownTest,
        SmellKind::RedundantPrint,
        SmellKind::SleepyTest,
        SmellKind::IgnoredTest,
        SmellKind::RedundantAssertion,
        SmellKind::DuplicateAssert,
        SmellKind::MagicNumber,
        SmellKind::EagerTest,
        SmellKind::InappropriateAssertion,
        SmellKind::SensitiveEquality,
        SmellKind::ConstructorInitialization,
        SmellKind::ObscureInLineSetup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SmellKind::LackOfCohesion => "LackOfCohesion",
            SmellKind::EmptyTest => "EmptyTest",
            SmellKind::ConditionalTestSmell => "ConditionalTestSmell",
            SmellKind::AssertionRoulette => "AssertionRoulette",
            SmellKind::UnknownTest => "UnknownTest",
            SmellKind::RedundantPrint => "RedundantPrint",
            SmellKind::SleepyTest => "SleepyTest",
            SmellKind::IgnoredTest => "IgnoredTest",
            SmellKind::RedundantAssertion => "RedundantAssertion",
            SmellKind::DuplicateAssert => "DuplicateAssert",
            SmellKind::MagicNumber => "MagicNumber",
            SmellKind::EagerTest => "EagerTest",
            SmellKind::InappropriateAssertion => "InappropriateAssertion",
            SmellKind::SensitiveEquality => "SensitiveEquality",
            SmellKind::ConstructorInitialization => "ConstructorInitialization",
            SmellKind::ObscureInLineSetup => "ObscureInLineSetup",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn granularity(self) -> Granularity {
        match self {
            SmellKind::LackOfCohesion | SmellKind::ConstructorInitialization => Granularity::Suite,
            _ => Granularity::Case,
        }
    }
}

impl fmt::Display for SmellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SmellKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_name(s).ok_or_else(|| format!("unknown smell kind {s:?}"))
    }
}

impl Serialize for SmellKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SmellKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Case,
    Suite,
}

/// Name of whatever produced a finding: one of the built-in kinds or a
/// user-registered detector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Builtin(SmellKind),
    Custom(String),
}

impl DetectorKind {
    pub fn name(&self) -> &str {
        match self {
            DetectorKind::Builtin(k) => k.name(),
            DetectorKind::Custom(name) => name,
        }
    }

    pub fn builtin(&self) -> Option<SmellKind> {
        match self {
            DetectorKind::Builtin(k) => Some(*k),
            DetectorKind::Custom(_) => None,
        }
    }
}

impl From<SmellKind> for DetectorKind {
    fn from(k: SmellKind) -> Self {
        DetectorKind::Builtin(k)
    }
}

impl From<&str> for DetectorKind {
    fn from(name: &str) -> Self {
        SmellKind::from_name(name).map_or_else(|| DetectorKind::Custom(name.to_string()), DetectorKind::Builtin)
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl PartialOrd for DetectorKind {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DetectorKind {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.name().cmp(other.name())
    }
}

impl Serialize for DetectorKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for DetectorKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(DetectorKind::from(String::deserialize(d)?.as_str()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuplicateCompare {
    #[default]
    NormalizedText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorConfig {
    pub obscure_setup_threshold: usize,
    /// Largest number of distinct act calls that is still not eager.
    pub eager_test_threshold: usize,
    pub cohesion_threshold: f64,
    pub magic_number_deep: bool,
    pub magic_number_allowlist: BTreeSet<String>,
    pub duplicate_assert_compare: DuplicateCompare,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            obscure_setup_threshold: 10,
            eager_test_threshold: 1,
            cohesion_threshold: 0.4,
            magic_number_deep: false,
            magic_number_allowlist: ["0", "1"].into_iter().map(String::from).collect(),
            duplicate_assert_compare: DuplicateCompare::NormalizedText,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.cohesion_threshold) {
            return Err(format!(
                "cohesion_threshold must be within [0, 1], got {}",
                self.cohesion_threshold
            ));
        }
        Ok(())
    }
}

/// What a detector reports: where and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub span: Range<usize>,
    pub message: String,
}

impl Evidence {
    pub fn new(span: Range<usize>, message: impl Into<String>) -> Self {
        Self {
            span,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmellFinding {
    pub kind: DetectorKind,
    pub granularity: Granularity,
    pub file: String,
    pub suite: String,
    pub case: Option<String>,
    pub line: usize,
    pub col: usize,
    pub evidence: String,
    /// Byte span of the primary evidence; not part of serialized reports.
    #[serde(skip)]
    pub span: Range<usize>,
}

impl SmellFinding {
    pub fn for_case(kind: impl Into<DetectorKind>, case: &TestCase, evidence: Evidence) -> Self {
        let (line, col) = case.declaration.tree().source().line_col(evidence.span.start);
        Self {
            kind: kind.into(),
            granularity: Granularity::Case,
            file: case.file.clone(),
            suite: case.suite.clone(),
            case: Some(case.name.clone()),
            line,
            col,
            evidence: evidence.message,
            span: evidence.span,
        }
    }

    pub fn for_suite(kind: impl Into<DetectorKind>, suite: &TestSuite, evidence: Evidence) -> Self {
        let (line, col) = suite.declaration.tree().source().line_col(evidence.span.start);
        Self {
            kind: kind.into(),
            granularity: Granularity::Suite,
            file: suite.file.clone(),
            suite: suite.name.clone(),
            case: None,
            line,
            col,
            evidence: evidence.message,
            span: evidence.span,
        }
    }

    /// `Suite.Case`, or just the suite for suite-level findings.
    pub fn location_name(&self) -> String {
        match &self.case {
            Some(case) => format!("{}.{}", self.suite, case),
            None => self.suite.clone(),
        }
    }
}
