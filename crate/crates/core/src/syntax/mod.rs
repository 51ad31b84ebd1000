//! C# front end: tolerant parsing into a concrete syntax tree plus the tree
//! queries the rest of the crate is built on. Purely syntactic; nothing here
//! resolves symbols or types.

mod lexer;
mod parser;
mod source;
mod tree;

pub use lexer::{is_keyword, tokenize, Token, TokenKind};
pub use parser::{parse_bytes, parse_file, parse_text};
pub use source::SourceFile;
pub use tree::{ParseDiagnostic, Severity, SyntaxKind, SyntaxNode, SyntaxTree};

/// Descendants of `node` (excluding itself) whose kind is in `kinds`, in source order.
pub fn find_descendants(node: &SyntaxNode, kinds: &[SyntaxKind]) -> Vec<SyntaxNode> {
    node.find_descendants(kinds)
}

/// An attribute applied to a declaration, with its simple name and named arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeUse {
    pub name: String,
    pub named_args: Vec<(String, String)>,
    pub node: SyntaxNode,
}

/// Strips namespace/alias qualification, generic arguments and the
/// `Attribute` suffix: `Xunit.FactAttribute` becomes `Fact`.
pub fn simple_attribute_name(written: &str) -> String {
    let no_generics = written.split('<').next().unwrap_or(written);
    let last = no_generics
        .rsplit(['.', ':'])
        .next()
        .unwrap_or(no_generics)
        .trim()
        .trim_start_matches('@');
    last.strip_suffix("Attribute")
        .filter(|s| !s.is_empty())
        .unwrap_or(last)
        .to_string()
}

/// Attributes on a type or method declaration.
///
/// # Panics
///
/// When `decl` is not a type or method-like declaration.
pub fn attribute_names(decl: &SyntaxNode) -> Vec<AttributeUse> {
    assert!(
        decl.kind().is_type_declaration()
            || matches!(
                decl.kind(),
                SyntaxKind::MethodDeclaration | SyntaxKind::ConstructorDeclaration | SyntaxKind::LocalFunctionStatement
            ),
        "attribute_names called on {}",
        decl.kind()
    );
    let mut out = Vec::new();
    for list in decl.children_of(SyntaxKind::AttributeList) {
        for attr in list.children_of(SyntaxKind::Attribute) {
            let name = attr
                .first_child(SyntaxKind::Name)
                .map(|n| simple_attribute_name(&n.compact_text()))
                .unwrap_or_default();
            let mut named_args = Vec::new();
            if let Some(args) = attr.first_child(SyntaxKind::AttributeArgumentList) {
                for arg in args.children_of(SyntaxKind::AttributeArgument) {
                    let children: Vec<_> = arg.children().collect();
                    if let [key, value] = children.as_slice() {
                        if key.kind() == SyntaxKind::Name {
                            named_args.push((key.text().to_string(), value.text().to_string()));
                        }
                    }
                }
            }
            out.push(AttributeUse {
                name,
                named_args,
                node: attr,
            });
        }
    }
    out
}

/// Top-level executable statements of a method body (a block or an
/// expression body). Empty statements (`;`) are not executable.
pub fn enclosing_statements(body: &SyntaxNode) -> Vec<SyntaxNode> {
    match body.kind() {
        SyntaxKind::Block => body
            .children()
            .filter(|s| !matches!(s.kind(), SyntaxKind::EmptyStatement | SyntaxKind::Error))
            .collect(),
        SyntaxKind::ArrowExpressionClause => body.children().take(1).collect(),
        _ => Vec::new(),
    }
}

/// The body of a method-like declaration: its block or `=>` clause.
pub fn method_body(decl: &SyntaxNode) -> Option<SyntaxNode> {
    decl.children()
        .find(|c| matches!(c.kind(), SyntaxKind::Block | SyntaxKind::ArrowExpressionClause))
}
