//! The test model: which files hold xUnit tests, and for each suite and case
//! the facts the detectors consume.

mod config;
mod discover;
mod invocation;

use std::collections::BTreeSet;
use std::ops::Range;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{receiver_matches, CallPattern, ModelConfig};
pub use discover::{discover_test_files, is_test_file_candidate, relative_path, Candidate, Discovery, SkipReason, SkippedFile};
pub use invocation::{
    argument_expressions, callee_parts, classify_invocation, AssertionCall, InvocationClass, InvocationInfo,
};

use crate::diagnostic::Diagnostic;
use crate::syntax::{
    attribute_names, enclosing_statements, method_body, ParseDiagnostic, SyntaxKind, SyntaxNode, SyntaxTree,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestKind {
    Fact,
    Theory,
}

#[derive(Debug, Clone)]
pub struct TestCase {
    pub name: String,
    /// Name of the containing suite.
    pub suite: String,
    pub file: String,
    /// Span of the whole method declaration, attributes included.
    pub span: Range<usize>,
    pub kind: TestKind,
    pub skip_reason: Option<String>,
    /// Attribute carrying the `Fact`/`Theory` marker.
    pub marker: SyntaxNode,
    pub declaration: SyntaxNode,
    pub body: Option<SyntaxNode>,
    pub statements: Vec<SyntaxNode>,
    pub assertions: Vec<AssertionCall>,
    pub local_declaration_count: usize,
    pub invocations: Vec<InvocationInfo>,
}

#[derive(Debug, Clone)]
pub struct TestSuite {
    pub name: String,
    pub file: String,
    pub span: Range<usize>,
    pub cases: Vec<TestCase>,
    /// Non-test methods declared in the same type.
    pub helpers: Vec<String>,
    pub has_explicit_constructor: bool,
    pub constructor_statement_count: usize,
    pub constructors: Vec<SyntaxNode>,
    pub base_list_names: Vec<String>,
    pub declaration: SyntaxNode,
}

#[derive(Debug, Clone)]
pub struct TestFile {
    /// Path relative to the project root, `/`-separated.
    pub path: String,
    pub tree: SyntaxTree,
    pub suites: Vec<TestSuite>,
}

/// A parsed candidate file awaiting model extraction.
#[derive(Debug, Clone)]
pub struct ParsedFile {
    pub path: String,
    pub tree: SyntaxTree,
    pub diagnostics: Vec<ParseDiagnostic>,
}

#[derive(Debug, Clone, Default)]
pub struct TestProject {
    pub root: PathBuf,
    pub files: Vec<TestFile>,
    pub skipped_files: Vec<SkippedFile>,
    /// Parse diagnostics of every parsed candidate.
    pub diagnostics: Vec<Diagnostic>,
}

impl TestProject {
    pub fn suites(&self) -> impl Iterator<Item = &TestSuite> {
        self.files.iter().flat_map(|f| f.suites.iter())
    }

    pub fn cases(&self) -> impl Iterator<Item = &TestCase> {
        self.suites().flat_map(|s| s.cases.iter())
    }
}

/// Assembles a project from parsed files. Files are ordered by path; a file
/// that yields no suite is listed as skipped.
pub fn build_test_model(root: impl Into<PathBuf>, parsed: Vec<ParsedFile>, cfg: &ModelConfig) -> TestProject {
    let mut parsed = parsed;
    parsed.sort_by(|a, b| a.path.cmp(&b.path));
    let extracted: Vec<_> = parsed
        .into_par_iter()
        .map(|file| {
            let suites = extract_suites(&file.path, &file.tree, cfg);
            (file, suites)
        })
        .collect();
    let mut project = TestProject {
        root: root.into(),
        ..TestProject::default()
    };
    for (file, suites) in extracted {
        let source = file.tree.source();
        project
            .diagnostics
            .extend(file.diagnostics.iter().map(|d| Diagnostic::from_parse(&file.path, d, source)));
        if suites.is_empty() {
            project.skipped_files.push(SkippedFile {
                path: file.path,
                reason: SkipReason::NoTestSuites,
            });
        } else {
            project.files.push(TestFile {
                path: file.path,
                tree: file.tree,
                suites,
            });
        }
    }
    project
}

/// Every type declaration in the file holding at least one test method, in source order.
pub fn extract_suites(path: &str, tree: &SyntaxTree, cfg: &ModelConfig) -> Vec<TestSuite> {
    tree.root()
        .find_descendants(&[
            SyntaxKind::ClassDeclaration,
            SyntaxKind::StructDeclaration,
            SyntaxKind::RecordDeclaration,
        ])
        .into_iter()
        .filter_map(|decl| extract_suite(path, &decl, cfg))
        .collect()
}

fn qualified_type_name(decl: &SyntaxNode) -> String {
    let mut parts = vec![declared_name(decl)];
    for anc in decl.ancestors() {
        if anc.kind().is_type_declaration() {
            parts.push(declared_name(&anc));
        } else if anc.kind() == SyntaxKind::NamespaceDeclaration {
            parts.push(anc.first_child(SyntaxKind::Name).map(|n| n.compact_text()).unwrap_or_default());
        }
    }
    parts.retain(|p| !p.is_empty());
    parts.reverse();
    parts.join(".")
}

fn declared_name(decl: &SyntaxNode) -> String {
    decl.first_child(SyntaxKind::Name)
        .map(|n| n.compact_text())
        .unwrap_or_default()
}

fn has_modifier(decl: &SyntaxNode, modifier: &str) -> bool {
    decl.children_of(SyntaxKind::Modifier).any(|m| m.text() == modifier)
}

fn test_marker(decl: &SyntaxNode) -> Option<(TestKind, SyntaxNode, Option<String>)> {
    attribute_names(decl).into_iter().find_map(|attr| {
        let kind = match attr.name.as_str() {
            "Fact" => TestKind::Fact,
            "Theory" => TestKind::Theory,
            _ => return None,
        };
        let skip = attr
            .named_args
            .iter()
            .find(|(k, _)| k == "Skip")
            .map(|(_, v)| unquote(v));
        Some((kind, attr.node, skip))
    })
}

fn unquote(literal: &str) -> String {
    literal
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .map(str::to_string)
        .unwrap_or_else(|| literal.to_string())
}

fn extract_suite(path: &str, decl: &SyntaxNode, cfg: &ModelConfig) -> Option<TestSuite> {
    let methods: Vec<_> = decl.children_of(SyntaxKind::MethodDeclaration).collect();
    let method_names: BTreeSet<String> = methods.iter().map(declared_name).collect();
    let name = qualified_type_name(decl);

    let mut cases = Vec::new();
    let mut helpers = Vec::new();
    for m in &methods {
        match test_marker(m) {
            Some((kind, marker, skip_reason)) => cases.push(build_case(path, &name, m, kind, marker, skip_reason, &method_names, cfg)),
            None => helpers.push(declared_name(m)),
        }
    }
    if cases.is_empty() {
        return None;
    }

    let constructors: Vec<_> = decl
        .children_of(SyntaxKind::ConstructorDeclaration)
        .filter(|c| !has_modifier(c, "static"))
        .collect();
    let constructor_statement_count = constructors
        .iter()
        .filter_map(method_body)
        .map(|b| enclosing_statements(&b).len())
        .sum();
    let base_list_names = decl
        .first_child(SyntaxKind::BaseList)
        .map(|b| b.children_of(SyntaxKind::Type).map(|t| t.compact_text()).collect())
        .unwrap_or_default();

    Some(TestSuite {
        name,
        file: path.to_string(),
        span: decl.span(),
        cases,
        helpers,
        has_explicit_constructor: !constructors.is_empty(),
        constructor_statement_count,
        constructors,
        base_list_names,
        declaration: decl.clone(),
    })
}

#[allow(clippy::too_many_arguments)]
fn build_case(
    path: &str,
    suite: &str,
    decl: &SyntaxNode,
    kind: TestKind,
    marker: SyntaxNode,
    skip_reason: Option<String>,
    suite_methods: &BTreeSet<String>,
    cfg: &ModelConfig,
) -> TestCase {
    let body = method_body(decl);
    let (statements, invocations, local_declaration_count) = match &body {
        Some(body) => {
            let descendants = body.descendants();
            let mut helpers = suite_methods.clone();
            helpers.extend(
                descendants
                    .iter()
                    .filter(|n| n.kind() == SyntaxKind::LocalFunctionStatement)
                    .map(declared_name),
            );
            let invocations: Vec<_> = descendants
                .iter()
                .filter(|n| n.kind() == SyntaxKind::InvocationExpression)
                .map(|n| classify_invocation(n, cfg, &helpers))
                .collect();
            let locals = descendants
                .iter()
                .filter(|n| n.kind() == SyntaxKind::LocalDeclarationStatement)
                .count();
            (enclosing_statements(body), invocations, locals)
        }
        None => (Vec::new(), Vec::new(), 0),
    };
    let assertions = extract_assertions(&invocations);
    TestCase {
        name: declared_name(decl),
        suite: suite.to_string(),
        file: path.to_string(),
        span: decl.span(),
        kind,
        skip_reason,
        marker,
        declaration: decl.clone(),
        body,
        statements,
        assertions,
        local_declaration_count,
        invocations,
    }
}

/// The assertion-classified invocations, in source order.
pub fn extract_assertions(invocations: &[InvocationInfo]) -> Vec<AssertionCall> {
    invocations
        .iter()
        .filter(|i| i.class == InvocationClass::Assertion)
        .map(invocation::to_assertion)
        .collect()
}
