use std::collections::{BTreeSet, HashMap};

use super::cohesion::{case_terms, mean_pairwise_similarity};
use super::{DetectorConfig, Evidence, SmellFinding, SmellKind};
use crate::model::{callee_parts, AssertionCall, InvocationClass, TestCase, TestSuite};
use crate::syntax::{enclosing_statements, method_body, SyntaxKind, SyntaxNode};

const CONDITIONAL_KINDS: &[SyntaxKind] = &[
    SyntaxKind::IfStatement,
    SyntaxKind::SwitchStatement,
    SyntaxKind::SwitchExpression,
    SyntaxKind::ConditionalExpression,
    SyntaxKind::ForStatement,
    SyntaxKind::ForEachStatement,
    SyntaxKind::WhileStatement,
    SyntaxKind::DoStatement,
];

const COMPARISON_OPERATORS: &[&str] = &["==", "!=", "<", "<=", ">", ">="];
const EQUALITY_METHODS: &[&str] = &["Equal", "NotEqual", "Same", "NotSame", "StrictEqual"];
const FIXTURE_INTERFACE_PREFIXES: &[&str] = &["IClassFixture", "IUseFixture"];
const LIFETIME_INTERFACES: &[&str] = &["IDisposable", "IAsyncLifetime"];

macro_rules! finding_wrappers {
    (case { $($(#[$doc:meta])* $kind:ident: $detect:ident => $rule:ident;)* } suite { $($(#[$sdoc:meta])* $skind:ident: $sdetect:ident => $srule:ident;)* }) => {
        $(
            $(#[$doc])*
            pub fn $detect(case: &TestCase, cfg: &DetectorConfig) -> Option<SmellFinding> {
                $rule(case, cfg).map(|e| SmellFinding::for_case(SmellKind::$kind, case, e))
            }
        )*
        $(
            $(#[$sdoc])*
            pub fn $sdetect(suite: &TestSuite, cfg: &DetectorConfig) -> Option<SmellFinding> {
                $srule(suite, cfg).map(|e| SmellFinding::for_suite(SmellKind::$skind, suite, e))
            }
        )*

        /// Evidence from the built-in case-level rule for `kind`; `None` for suite-level kinds.
        pub(crate) fn case_rule(kind: SmellKind, case: &TestCase, cfg: &DetectorConfig) -> Option<Evidence> {
            match kind {
                $(SmellKind::$kind => $rule(case, cfg),)*
                _ => None,
            }
        }

        /// Evidence from the built-in suite-level rule for `kind`; `None` for case-level kinds.
        pub(crate) fn suite_rule(kind: SmellKind, suite: &TestSuite, cfg: &DetectorConfig) -> Option<Evidence> {
            match kind {
                $(SmellKind::$skind => $srule(suite, cfg),)*
                _ => None,
            }
        }
    };
}

finding_wrappers! {
    case {
        /// Two or more assertions without a failure message.
        AssertionRoulette: detect_assertion_roulette => assertion_roulette;
        /// Branching or looping anywhere in the body.
        ConditionalTestSmell: detect_conditional => conditional;
        /// `Assert.True`/`False` applied to a comparison or an `.Equals(...)` call.
        InappropriateAssertion: detect_inappropriate_assertion => inappropriate_assertion;
        /// Two assertions with the same normalized text.
        DuplicateAssert: detect_duplicate_assert => duplicate_assert;
        /// No executable statement.
        EmptyTest: detect_empty_test => empty_test;
        /// More distinct act calls than `eager_test_threshold`.
        EagerTest: detect_eager_test => eager_test;
        /// A `Skip` argument on the test attribute.
        IgnoredTest: detect_ignored_test => ignored_test;
        /// A non-allowlisted numeric literal as an assertion argument.
        MagicNumber: detect_magic_number => magic_number;
        /// More local declarations than `obscure_setup_threshold`.
        ObscureInLineSetup: detect_obscure_inline_setup => obscure_inline_setup;
        /// An assertion that cannot fail or cannot pass.
        RedundantAssertion: detect_redundant_assertion => redundant_assertion;
        /// A console/debug/trace output call.
        RedundantPrint: detect_redundant_print => redundant_print;
        /// A sleep or delay call.
        SleepyTest: detect_sleepy_test => sleepy_test;
        /// `.ToString()` inside an assertion argument.
        SensitiveEquality: detect_sensitive_equality => sensitive_equality;
        /// No assertion at all.
        UnknownTest: detect_unknown_test => unknown_test;
    }
    suite {
        /// Mean pairwise cosine similarity of case bodies below `cohesion_threshold`.
        LackOfCohesion: detect_lack_of_cohesion => lack_of_cohesion;
        /// Setup done in a constructor of a suite that uses none of the xUnit fixture interfaces.
        ConstructorInitialization: detect_constructor_initialization => constructor_initialization;
    }
}

fn strip_parens(mut node: SyntaxNode) -> SyntaxNode {
    while node.kind() == SyntaxKind::ParenthesizedExpression {
        match node.child(0) {
            Some(inner) => node = inner,
            None => break,
        }
    }
    node
}

/// Operator text of a binary expression: the tokens between its operands.
fn binary_operator(node: &SyntaxNode) -> String {
    let (Some(lhs), Some(rhs)) = (node.child(0), node.child(1)) else {
        return String::new();
    };
    let (from, to) = (lhs.span().end, rhs.span().start);
    let text = node.tree().source().text();
    node.tokens()
        .iter()
        .filter(|t| t.span.start >= from && t.span.end <= to)
        .map(|t| &text[t.span.clone()])
        .collect()
}

fn is_member_call(node: &SyntaxNode, method: &str) -> bool {
    node.kind() == SyntaxKind::InvocationExpression
        && node.child(0).is_some_and(|t| t.kind() == SyntaxKind::MemberAccessExpression)
        && callee_parts(node).1 == method
}

fn name_span(decl: &SyntaxNode) -> std::ops::Range<usize> {
    decl.first_child(SyntaxKind::Name)
        .map(|n| n.span())
        .unwrap_or_else(|| decl.span())
}

fn call_label(a: &AssertionCall) -> String {
    format!("{}.{}", a.receiver, a.method)
}

fn assertion_roulette(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    let undocumented: Vec<_> = case.assertions.iter().filter(|a| !a.is_documented).collect();
    (undocumented.len() >= 2).then(|| {
        Evidence::new(
            undocumented[1].span.clone(),
            format!("{} undocumented assertions", undocumented.len()),
        )
    })
}

fn conditional(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    let body = case.body.as_ref()?;
    let first = body.find_descendants(CONDITIONAL_KINDS).into_iter().next()?;
    Some(Evidence::new(first.span(), format!("contains {}", first.kind())))
}

fn inappropriate_assertion(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    case.assertions.iter().find_map(|a| {
        if !matches!(a.method.as_str(), "True" | "False") {
            return None;
        }
        let first = strip_parens(a.arguments.first()?.clone());
        let what = if first.kind() == SyntaxKind::BinaryExpression {
            let op = binary_operator(&first);
            COMPARISON_OPERATORS.contains(&op.as_str()).then(|| format!("`{op}` comparison"))?
        } else if is_member_call(&first, "Equals") {
            "an Equals call".to_string()
        } else {
            return None;
        };
        Some(Evidence::new(a.span.clone(), format!("{} on {what}", call_label(a))))
    })
}

fn duplicate_assert(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    let mut seen: HashMap<&str, &AssertionCall> = HashMap::new();
    for a in &case.assertions {
        if let Some(first) = seen.get(a.normalized_text.as_str()) {
            let (line, _) = case.declaration.tree().source().line_col(first.span.start);
            return Some(Evidence::new(
                a.span.clone(),
                format!("{} repeats the assertion on line {line}", call_label(a)),
            ));
        }
        seen.insert(&a.normalized_text, a);
    }
    None
}

fn empty_test(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    case.statements
        .is_empty()
        .then(|| Evidence::new(name_span(&case.declaration), "no executable statements"))
}

fn eager_test(case: &TestCase, cfg: &DetectorConfig) -> Option<Evidence> {
    let mut distinct = BTreeSet::new();
    let mut over = None;
    for inv in case.invocations.iter().filter(|i| i.class == InvocationClass::Act) {
        if distinct.insert((inv.receiver.as_str(), inv.callee.as_str())) && distinct.len() == cfg.eager_test_threshold + 1 {
            over = Some(inv.span.clone());
        }
    }
    let span = over?;
    let mut names: Vec<_> = distinct
        .iter()
        .take(3)
        .map(|(r, c)| if r.is_empty() || r.len() > 24 { c.to_string() } else { format!("{r}.{c}") })
        .collect();
    if distinct.len() > 3 {
        names.push("...".to_string());
    }
    Some(Evidence::new(
        span,
        format!("{} distinct production calls: {}", distinct.len(), names.join(", ")),
    ))
}

fn ignored_test(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    let reason = case.skip_reason.as_ref()?;
    Some(Evidence::new(case.marker.span(), format!("skipped: {reason}")))
}

fn numeric_literal_text(node: &SyntaxNode) -> Option<String> {
    match node.kind() {
        SyntaxKind::NumericLiteral => Some(node.text().to_string()),
        SyntaxKind::PrefixUnaryExpression
            if matches!(node.first_token_text(), "-" | "+") && node.child_count() == 1 =>
        {
            let inner = node.child(0)?;
            (inner.kind() == SyntaxKind::NumericLiteral).then(|| inner.text().to_string())
        }
        _ => None,
    }
}

fn magic_number(case: &TestCase, cfg: &DetectorConfig) -> Option<Evidence> {
    let allowed = |text: &str| cfg.magic_number_allowlist.contains(text);
    for a in &case.assertions {
        for arg in &a.arguments {
            let hit = if cfg.magic_number_deep {
                arg.self_and_descendants()
                    .into_iter()
                    .find(|n| n.kind() == SyntaxKind::NumericLiteral && !allowed(n.text()))
                    .map(|n| (n.span(), n.text().to_string()))
            } else {
                numeric_literal_text(arg)
                    .filter(|t| !allowed(t))
                    .map(|_| (arg.span(), arg.text().split_whitespace().collect()))
            };
            if let Some((span, text)) = hit {
                return Some(Evidence::new(span, format!("magic number {text} in {}", call_label(a))));
            }
        }
    }
    None
}

fn obscure_inline_setup(case: &TestCase, cfg: &DetectorConfig) -> Option<Evidence> {
    if case.local_declaration_count <= cfg.obscure_setup_threshold {
        return None;
    }
    let span = case
        .body
        .as_ref()
        .and_then(|b| {
            b.find_descendants(&[SyntaxKind::LocalDeclarationStatement])
                .into_iter()
                .nth(cfg.obscure_setup_threshold)
        })
        .map(|n| n.span())
        .unwrap_or_else(|| name_span(&case.declaration));
    Some(Evidence::new(
        span,
        format!(
            "{} local declarations (threshold {})",
            case.local_declaration_count, cfg.obscure_setup_threshold
        ),
    ))
}

fn redundant_assertion(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    case.assertions.iter().find_map(|a| {
        let why = if EQUALITY_METHODS.contains(&a.method.as_str()) {
            let [x, y, ..] = a.arguments.as_slice() else {
                return None;
            };
            (x.normalized_text() == y.normalized_text()).then_some("compares an expression with itself")?
        } else if matches!(a.method.as_str(), "True" | "False") {
            let first = strip_parens(a.arguments.first()?.clone());
            (first.kind() == SyntaxKind::BooleanLiteral).then_some("asserts a boolean literal")?
        } else {
            return None;
        };
        Some(Evidence::new(a.span.clone(), format!("{} {why}", call_label(a))))
    })
}

fn first_invocation_of(case: &TestCase, class: InvocationClass) -> Option<Evidence> {
    let inv = case.invocations.iter().find(|i| i.class == class)?;
    let label = if inv.receiver.is_empty() {
        inv.callee.clone()
    } else {
        format!("{}.{}", inv.receiver, inv.callee)
    };
    Some(Evidence::new(inv.span.clone(), format!("calls {label}")))
}

fn redundant_print(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    first_invocation_of(case, InvocationClass::Output)
}

fn sleepy_test(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    first_invocation_of(case, InvocationClass::Sleep)
}

fn sensitive_equality(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    case.assertions.iter().find_map(|a| {
        a.arguments
            .iter()
            .flat_map(|arg| arg.self_and_descendants())
            .find(|n| is_member_call(n, "ToString"))
            .map(|n| Evidence::new(n.span(), format!("{} compares a ToString() result", call_label(a))))
    })
}

fn unknown_test(case: &TestCase, _cfg: &DetectorConfig) -> Option<Evidence> {
    case.assertions
        .is_empty()
        .then(|| Evidence::new(name_span(&case.declaration), "no assertions"))
}

fn lack_of_cohesion(suite: &TestSuite, cfg: &DetectorConfig) -> Option<Evidence> {
    if suite.cases.len() < 2 {
        return None;
    }
    let vectors: Vec<_> = suite.cases.iter().map(case_terms).collect();
    let mean = mean_pairwise_similarity(&vectors);
    (mean < cfg.cohesion_threshold).then(|| {
        Evidence::new(
            name_span(&suite.declaration),
            format!(
                "mean pairwise similarity {mean:.3} below {} across {} cases",
                cfg.cohesion_threshold,
                suite.cases.len()
            ),
        )
    })
}

fn simple_type_name(written: &str) -> &str {
    let no_generics = written.split('<').next().unwrap_or(written);
    no_generics.rsplit(['.', ':']).next().unwrap_or(no_generics).trim()
}

fn constructor_initialization(suite: &TestSuite, _cfg: &DetectorConfig) -> Option<Evidence> {
    if !suite.has_explicit_constructor || suite.constructor_statement_count == 0 {
        return None;
    }
    let uses_fixture = suite.base_list_names.iter().any(|written| {
        let name = simple_type_name(written);
        FIXTURE_INTERFACE_PREFIXES.iter().any(|p| name.starts_with(p)) || LIFETIME_INTERFACES.contains(&name)
    });
    if uses_fixture {
        return None;
    }
    let ctor = suite
        .constructors
        .iter()
        .find(|c| method_body(c).is_some_and(|b| !enclosing_statements(&b).is_empty()))
        .unwrap_or(&suite.constructors[0]);
    Some(Evidence::new(
        name_span(ctor),
        match suite.constructor_statement_count {
            1 => "constructor initializes fixture with 1 statement".to_string(),
            n => format!("constructor initializes fixture with {n} statements"),
        },
    ))
}
