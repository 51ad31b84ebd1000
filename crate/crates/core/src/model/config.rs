use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A `(receiver, method)` pair written as `Receiver.Method`, or a bare `Method`
/// for calls without a receiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CallPattern {
    pub receiver: String,
    pub method: String,
}

impl CallPattern {
    pub fn new(receiver: &str, method: &str) -> Self {
        Self {
            receiver: receiver.to_string(),
            method: method.to_string(),
        }
    }

    pub fn matches(&self, receiver: &str, method: &str) -> bool {
        self.method == method && receiver_matches(receiver, &self.receiver)
    }
}

impl fmt::Display for CallPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.receiver.is_empty() {
            f.write_str(&self.method)
        } else {
            write!(f, "{}.{}", self.receiver, self.method)
        }
    }
}

impl FromStr for CallPattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (receiver, method) = s.rsplit_once('.').unwrap_or(("", s));
        if method.is_empty() || method.contains(char::is_whitespace) {
            return Err(format!("invalid call pattern {s:?}"));
        }
        Ok(Self::new(receiver, method))
    }
}

impl Serialize for CallPattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CallPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Whether a receiver as written names `expected`, allowing namespace
/// qualification: `Xunit.Assert` and `global::Xunit.Assert` both match `Assert`.
pub fn receiver_matches(receiver: &str, expected: &str) -> bool {
    if receiver == expected {
        return true;
    }
    if expected.is_empty() {
        return false;
    }
    let Some(prefix) = receiver.strip_suffix(expected) else {
        return false;
    };
    let Some(qualifier) = prefix.strip_suffix('.').or_else(|| prefix.strip_suffix("::")) else {
        return false;
    };
    qualifier
        .split(['.', ':'])
        .filter(|p| !p.is_empty())
        .all(|p| p.chars().all(|c| c == '_' || c.is_alphanumeric()))
}

/// Lists that drive invocation classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub assertion_receivers: Vec<String>,
    pub sleep_calls: Vec<CallPattern>,
    pub output_calls: Vec<CallPattern>,
    pub framework_calls: Vec<CallPattern>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        let calls = |items: &[(&str, &str)]| items.iter().map(|(r, m)| CallPattern::new(r, m)).collect();
        Self {
            assertion_receivers: vec!["Assert".into(), "Record".into()],
            sleep_calls: calls(&[("Thread", "Sleep"), ("Task", "Delay")]),
            output_calls: calls(&[
                ("Console", "Write"),
                ("Console", "WriteLine"),
                ("Debug", "Write"),
                ("Debug", "WriteLine"),
                ("Debug", "Print"),
                ("Trace", "Write"),
                ("Trace", "WriteLine"),
            ]),
            framework_calls: calls(&[("", "nameof")]),
        }
    }
}
