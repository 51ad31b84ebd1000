use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::lexer::{Token, TokenKind};
use super::source::SourceFile;

macro_rules! syntax_kinds {
    ($($variant:ident => $name:literal,)*) => {
        /// Node kinds of the concrete syntax tree. Constructs the analysis does
        /// not care about collapse into a handful of generic kinds.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum SyntaxKind {
            $($variant,)*
        }

        impl SyntaxKind {
            pub fn as_str(self) -> &'static str {
                match self {
                    $(SyntaxKind::$variant => $name,)*
                }
            }
        }
    };
}

syntax_kinds! {
    CompilationUnit => "compilation-unit",
    UsingDirective => "using-directive",
    NamespaceDeclaration => "namespace-declaration",
    ClassDeclaration => "class-declaration",
    StructDeclaration => "struct-declaration",
    InterfaceDeclaration => "interface-declaration",
    RecordDeclaration => "record-declaration",
    EnumDeclaration => "enum-declaration",
    DelegateDeclaration => "delegate-declaration",
    BaseList => "base-list",
    TypeParameterList => "type-parameter-list",
    ConstraintClauses => "constraint-clauses",
    AttributeList => "attribute-list",
    Attribute => "attribute",
    AttributeArgumentList => "attribute-argument-list",
    AttributeArgument => "attribute-argument",
    MethodDeclaration => "method-declaration",
    ConstructorDeclaration => "constructor-declaration",
    DestructorDeclaration => "destructor-declaration",
    PropertyDeclaration => "property-declaration",
    FieldDeclaration => "field-declaration",
    EventDeclaration => "event-declaration",
    IndexerDeclaration => "indexer-declaration",
    OperatorDeclaration => "operator-declaration",
    AccessorList => "accessor-list",
    ParameterList => "parameter-list",
    Parameter => "parameter",
    Modifier => "modifier",
    Name => "name",
    Type => "type",
    Block => "block",
    ArrowExpressionClause => "arrow-expression-clause",
    VariableDeclarator => "variable-declarator",
    LocalDeclarationStatement => "local-declaration-statement",
    LocalFunctionStatement => "local-function-statement",
    ExpressionStatement => "expression-statement",
    IfStatement => "if-statement",
    ElseClause => "else-clause",
    SwitchStatement => "switch-statement",
    SwitchSection => "switch-section",
    SwitchLabel => "switch-label",
    ForStatement => "for-statement",
    ForEachStatement => "foreach-statement",
    WhileStatement => "while-statement",
    DoStatement => "do-statement",
    ReturnStatement => "return-statement",
    ThrowStatement => "throw-statement",
    TryStatement => "try-statement",
    CatchClause => "catch-clause",
    FinallyClause => "finally-clause",
    UsingStatement => "using-statement",
    LockStatement => "lock-statement",
    FixedStatement => "fixed-statement",
    CheckedStatement => "checked-statement",
    UnsafeStatement => "unsafe-statement",
    YieldStatement => "yield-statement",
    JumpStatement => "jump-statement",
    LabeledStatement => "labeled-statement",
    EmptyStatement => "empty-statement",
    InvocationExpression => "invocation-expression",
    ArgumentList => "argument-list",
    BracketedArgumentList => "bracketed-argument-list",
    Argument => "argument",
    MemberAccessExpression => "member-access-expression",
    ElementAccessExpression => "element-access-expression",
    IdentifierName => "identifier-name",
    GenericName => "generic-name",
    TypeArgumentList => "type-argument-list",
    PredefinedType => "predefined-type",
    NumericLiteral => "numeric-literal",
    StringLiteral => "string-literal",
    InterpolatedString => "interpolated-string",
    CharLiteral => "char-literal",
    BooleanLiteral => "boolean-literal",
    NullLiteral => "null-literal",
    DefaultExpression => "default-expression",
    ThisExpression => "this-expression",
    BaseExpression => "base-expression",
    BinaryExpression => "binary-expression",
    AssignmentExpression => "assignment-expression",
    PrefixUnaryExpression => "prefix-unary-expression",
    PostfixUnaryExpression => "postfix-unary-expression",
    ConditionalExpression => "conditional-expression",
    SwitchExpression => "switch-expression",
    SwitchExpressionArm => "switch-expression-arm",
    IsPatternExpression => "is-pattern-expression",
    Pattern => "pattern",
    CastExpression => "cast-expression",
    ParenthesizedExpression => "parenthesized-expression",
    TupleExpression => "tuple-expression",
    LambdaExpression => "lambda-expression",
    AnonymousMethodExpression => "anonymous-method-expression",
    ObjectCreationExpression => "object-creation-expression",
    ArrayCreationExpression => "array-creation-expression",
    AnonymousObjectCreationExpression => "anonymous-object-creation-expression",
    InitializerExpression => "initializer-expression",
    CollectionExpression => "collection-expression",
    AwaitExpression => "await-expression",
    TypeOfExpression => "typeof-expression",
    CheckedExpression => "checked-expression",
    ThrowExpression => "throw-expression",
    RangeExpression => "range-expression",
    DeclarationExpression => "declaration-expression",
    RefExpression => "ref-expression",
    StackAllocExpression => "stackalloc-expression",
    WithExpression => "with-expression",
    QueryExpression => "query-expression",
    Error => "error",
}

impl SyntaxKind {
    pub fn is_type_declaration(self) -> bool {
        matches!(
            self,
            SyntaxKind::ClassDeclaration
                | SyntaxKind::StructDeclaration
                | SyntaxKind::InterfaceDeclaration
                | SyntaxKind::RecordDeclaration
        )
    }
}

impl fmt::Display for SyntaxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub path: std::path::PathBuf,
    pub span: Range<usize>,
    pub message: String,
    pub severity: Severity,
}

pub(crate) type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct NodeData {
    pub kind: SyntaxKind,
    pub span: Range<usize>,
    /// Half-open range into the token vector.
    pub tokens: Range<usize>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) struct TreeData {
    pub source: SourceFile,
    pub tokens: Vec<Token>,
    pub nodes: Vec<NodeData>,
    pub root: NodeId,
}

/// An immutable parsed file. Cheap to clone; nodes keep the tree alive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxTree(pub(crate) Arc<TreeData>);

impl SyntaxTree {
    pub fn root(&self) -> SyntaxNode {
        SyntaxNode {
            tree: self.clone(),
            id: self.0.root,
        }
    }

    pub fn source(&self) -> &SourceFile {
        &self.0.source
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0.tokens
    }

    pub fn token_text(&self, token: &Token) -> &str {
        &self.0.source.text()[token.span.clone()]
    }

    pub fn node_count(&self) -> usize {
        self.0.nodes.len()
    }
}

/// Handle to one node of a [`SyntaxTree`].
#[derive(Clone)]
pub struct SyntaxNode {
    tree: SyntaxTree,
    id: NodeId,
}

impl PartialEq for SyntaxNode {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && Arc::ptr_eq(&self.tree.0, &other.tree.0)
    }
}

impl Eq for SyntaxNode {}

impl fmt::Debug for SyntaxNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.kind(), self.span())
    }
}

impl SyntaxNode {
    fn data(&self) -> &NodeData {
        &self.tree.0.nodes[self.id as usize]
    }

    fn at(&self, id: NodeId) -> SyntaxNode {
        SyntaxNode {
            tree: self.tree.clone(),
            id,
        }
    }

    pub fn tree(&self) -> &SyntaxTree {
        &self.tree
    }

    pub fn kind(&self) -> SyntaxKind {
        self.data().kind
    }

    pub fn span(&self) -> Range<usize> {
        self.data().span.clone()
    }

    pub fn text(&self) -> &str {
        &self.tree.0.source.text()[self.data().span.clone()]
    }

    /// 1-based (line, column) of the node start.
    pub fn line_col(&self) -> (usize, usize) {
        self.tree.0.source.line_col(self.data().span.start)
    }

    pub fn parent(&self) -> Option<SyntaxNode> {
        self.data().parent.map(|id| self.at(id))
    }

    pub fn children(&self) -> impl Iterator<Item = SyntaxNode> + '_ {
        self.data().children.iter().map(|&id| self.at(id))
    }

    pub fn child_count(&self) -> usize {
        self.data().children.len()
    }

    pub fn child(&self, index: usize) -> Option<SyntaxNode> {
        self.data().children.get(index).map(|&id| self.at(id))
    }

    pub fn first_child(&self, kind: SyntaxKind) -> Option<SyntaxNode> {
        self.children().find(|c| c.kind() == kind)
    }

    pub fn children_of(&self, kind: SyntaxKind) -> impl Iterator<Item = SyntaxNode> + '_ {
        self.children().filter(move |c| c.kind() == kind)
    }

    /// All descendants in source (pre-)order, excluding `self`.
    pub fn descendants(&self) -> Vec<SyntaxNode> {
        let nodes = &self.tree.0.nodes;
        let mut out = Vec::new();
        let mut stack: Vec<NodeId> = nodes[self.id as usize].children.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            out.push(self.at(id));
            stack.extend(nodes[id as usize].children.iter().rev());
        }
        out
    }

    /// Descendants (not `self`) whose kind is in `kinds`, in source order.
    pub fn find_descendants(&self, kinds: &[SyntaxKind]) -> Vec<SyntaxNode> {
        if kinds.is_empty() {
            return Vec::new();
        }
        self.descendants()
            .into_iter()
            .filter(|n| kinds.contains(&n.kind()))
            .collect()
    }

    /// `self` followed by its descendants.
    pub fn self_and_descendants(&self) -> Vec<SyntaxNode> {
        let mut out = vec![self.clone()];
        out.extend(self.descendants());
        out
    }

    pub fn ancestors(&self) -> impl Iterator<Item = SyntaxNode> + '_ {
        std::iter::successors(self.parent(), |n| n.parent())
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tree.0.tokens[self.data().tokens.clone()]
    }

    pub fn token_texts(&self) -> impl Iterator<Item = &str> {
        let text = self.tree.0.source.text();
        self.tokens().iter().map(move |t| &text[t.span.clone()])
    }

    /// Canonical token string: tokens joined by single spaces, trivia removed.
    pub fn normalized_text(&self) -> String {
        self.token_texts().collect::<Vec<_>>().join(" ")
    }

    /// Compact canonical text: tokens concatenated, with a single space only
    /// where two word-like tokens would otherwise fuse. `Thread . Sleep`
    /// becomes `Thread.Sleep`; `new  Foo()` becomes `new Foo()`.
    pub fn compact_text(&self) -> String {
        let text = self.tree.0.source.text();
        let mut out = String::new();
        let mut prev_word = false;
        for t in self.tokens() {
            let word = matches!(
                t.kind,
                TokenKind::Identifier | TokenKind::Keyword | TokenKind::NumericLiteral
            );
            if word && prev_word {
                out.push(' ');
            }
            out.push_str(&text[t.span.clone()]);
            prev_word = word;
        }
        out
    }

    /// Text of the first token, or empty for zero-width nodes.
    pub fn first_token_text(&self) -> &str {
        self.token_texts().next().unwrap_or("")
    }
}
