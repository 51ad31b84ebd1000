use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{ParseDiagnostic, Severity, SourceFile};

/// A parse or tool diagnostic as it appears in reports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn error(file: impl Into<String>, line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            file: file.into(),
            line,
            col,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    pub fn warning(file: impl Into<String>, line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(file, line, col, message)
        }
    }

    /// Converts a parse diagnostic reported against `source`.
    pub fn from_parse(file: &str, diag: &ParseDiagnostic, source: &SourceFile) -> Self {
        let (line, col) = source.line_col(diag.span.start);
        Self {
            file: file.to_string(),
            line,
            col,
            severity: diag.severity,
            message: diag.message.clone(),
        }
    }
}

/// `file:line:col: severity: message`
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}: {}", self.file, self.line, self.col, self.severity, self.message)
    }
}
