use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::config::ModelConfig;
use crate::syntax::{SyntaxKind, SyntaxNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvocationClass {
    Assertion,
    Sleep,
    Output,
    LocalHelper,
    Framework,
    Act,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvocationInfo {
    pub callee: String,
    /// Receiver in compact canonical form; empty for bare calls.
    pub receiver: String,
    pub full_text: String,
    pub span: Range<usize>,
    pub class: InvocationClass,
    pub node: SyntaxNode,
}

/// An invocation classified as an assertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertionCall {
    pub method: String,
    pub receiver: String,
    /// Argument expressions, in order; argument names and `ref`/`out` are not part of them.
    pub arguments: Vec<SyntaxNode>,
    pub normalized_text: String,
    pub is_documented: bool,
    pub span: Range<usize>,
    pub node: SyntaxNode,
}

/// Receiver and simple callee name of an invocation expression.
pub fn callee_parts(invocation: &SyntaxNode) -> (String, String) {
    let Some(target) = invocation.child(0) else {
        return (String::new(), String::new());
    };
    match target.kind() {
        SyntaxKind::MemberAccessExpression => {
            let receiver = target.child(0).map(|r| r.compact_text()).unwrap_or_default();
            let callee = target.child(1).map(|n| simple_name(&n)).unwrap_or_default();
            (receiver, callee)
        }
        SyntaxKind::IdentifierName | SyntaxKind::GenericName => (String::new(), simple_name(&target)),
        _ => (String::new(), target.compact_text()),
    }
}

fn simple_name(name: &SyntaxNode) -> String {
    let ident = match name.kind() {
        SyntaxKind::GenericName => name.child(0).map(|n| n.text().to_string()).unwrap_or_default(),
        _ => name.text().to_string(),
    };
    ident.trim_start_matches('@').to_string()
}

/// Argument expressions of an invocation, in order.
pub fn argument_expressions(invocation: &SyntaxNode) -> Vec<SyntaxNode> {
    invocation
        .first_child(SyntaxKind::ArgumentList)
        .map(|list| {
            list.children_of(SyntaxKind::Argument)
                .filter_map(|a| a.children().last())
                .collect()
        })
        .unwrap_or_default()
}

/// Classifies one invocation. `helpers` holds names of methods callable
/// without a receiver from the test: suite methods and local functions.
pub fn classify_invocation(inv: &SyntaxNode, cfg: &ModelConfig, helpers: &BTreeSet<String>) -> InvocationInfo {
    debug_assert_eq!(inv.kind(), SyntaxKind::InvocationExpression);
    let (receiver, callee) = callee_parts(inv);
    let class = if cfg
        .assertion_receivers
        .iter()
        .any(|r| super::config::receiver_matches(&receiver, r))
    {
        InvocationClass::Assertion
    } else if cfg.sleep_calls.iter().any(|p| p.matches(&receiver, &callee)) {
        InvocationClass::Sleep
    } else if cfg.output_calls.iter().any(|p| p.matches(&receiver, &callee)) {
        InvocationClass::Output
    } else if (receiver.is_empty() || receiver == "this") && helpers.contains(&callee) {
        InvocationClass::LocalHelper
    } else if cfg.framework_calls.iter().any(|p| p.matches(&receiver, &callee)) {
        InvocationClass::Framework
    } else {
        InvocationClass::Act
    };
    InvocationInfo {
        callee,
        receiver,
        full_text: inv.normalized_text(),
        span: inv.span(),
        class,
        node: inv.clone(),
    }
}

pub(crate) fn to_assertion(info: &InvocationInfo) -> AssertionCall {
    let arguments = argument_expressions(&info.node);
    let is_documented = matches!(info.callee.as_str(), "True" | "False")
        && arguments.len() >= 2
        && arguments
            .last()
            .is_some_and(|a| matches!(a.kind(), SyntaxKind::StringLiteral | SyntaxKind::InterpolatedString));
    AssertionCall {
        method: info.callee.clone(),
        receiver: info.receiver.clone(),
        arguments,
        normalized_text: info.full_text.clone(),
        is_documented,
        span: info.span.clone(),
        node: info.node.clone(),
    }
}
