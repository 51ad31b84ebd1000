//! Error-tolerant recursive-descent parser for the C# subset the analysis needs.
//!
//! The parser never fails: unexpected tokens become `Error` nodes with a
//! diagnostic and parsing resumes at the next plausible boundary. Every node
//! covers a contiguous token range, so child spans nest inside parent spans and
//! siblings never overlap.

use std::ops::Range;
use std::path::PathBuf;
use std::sync::Arc;

use super::lexer::{self, Token, TokenKind};
use super::source::SourceFile;
use super::tree::{NodeData, NodeId, ParseDiagnostic, Severity, SyntaxKind, SyntaxTree, TreeData};

const MAX_DEPTH: usize = 128;

const PREDEFINED_TYPES: &[&str] = &[
    "bool", "byte", "char", "decimal", "double", "float", "int", "long", "object", "sbyte",
    "short", "string", "uint", "ulong", "ushort", "void",
];

const MEMBER_MODIFIERS: &[&str] = &[
    "public", "private", "protected", "internal", "static", "abstract", "sealed", "readonly",
    "virtual", "override", "extern", "unsafe", "new", "const", "volatile", "fixed",
];

const CONTEXTUAL_MODIFIERS: &[&str] = &["partial", "async", "required", "file", "scoped"];

// Tokens that cannot start a statement; seeing one inside a block means the
// block's closing brace is missing.
const BLOCK_BREAKERS: &[&str] = &[
    "public", "private", "protected", "internal", "class", "struct", "interface", "enum",
    "namespace",
];

/// Parses a decoded source file. Total: never panics, never aborts.
pub fn parse_file(file: SourceFile) -> (SyntaxTree, Vec<ParseDiagnostic>) {
    let lexed = lexer::tokenize(file.text());
    let mut p = Parser {
        text: file.text(),
        tokens: &lexed.tokens,
        pos: 0,
        nodes: Vec::new(),
        diags: lexed.errors.into_iter().map(|e| (e.span, e.message)).collect(),
        depth: 0,
        type_names: Vec::new(),
    };
    let root = p.compilation_unit();
    let mut nodes = p.nodes;
    let diags = p.diags;
    link_parents(&mut nodes);
    let path = file.path().to_path_buf();
    let diagnostics = diags
        .into_iter()
        .map(|(span, message)| ParseDiagnostic {
            path: path.clone(),
            span,
            message,
            severity: Severity::Error,
        })
        .collect();
    let tree = SyntaxTree(Arc::new(TreeData {
        source: file,
        tokens: lexed.tokens,
        nodes,
        root,
    }));
    (tree, diagnostics)
}

/// Parses raw file bytes; invalid UTF-8 yields an empty tree and one error.
pub fn parse_bytes(path: impl Into<PathBuf>, bytes: Vec<u8>) -> (SyntaxTree, Vec<ParseDiagnostic>) {
    let path = path.into();
    match SourceFile::from_bytes(path.clone(), bytes) {
        Ok(file) => parse_file(file),
        Err(err) => {
            let (tree, _) = parse_file(SourceFile::new(path.clone(), String::new()));
            let diag = ParseDiagnostic {
                path,
                span: 0..0,
                message: format!("file is not valid UTF-8: {err}"),
                severity: Severity::Error,
            };
            (tree, vec![diag])
        }
    }
}

pub fn parse_text(path: impl Into<PathBuf>, text: &str) -> (SyntaxTree, Vec<ParseDiagnostic>) {
    parse_file(SourceFile::new(path, text))
}

fn link_parents(nodes: &mut [NodeData]) {
    for id in 0..nodes.len() {
        for i in 0..nodes[id].children.len() {
            let child = nodes[id].children[i] as usize;
            nodes[child].parent = Some(id as NodeId);
        }
    }
}

struct Checkpoint {
    pos: usize,
    nodes: usize,
    diags: usize,
}

struct Parser<'s> {
    text: &'s str,
    tokens: &'s [Token],
    pos: usize,
    nodes: Vec<NodeData>,
    diags: Vec<(Range<usize>, String)>,
    depth: usize,
    type_names: Vec<&'s str>,
}

impl<'s> Parser<'s> {
    // ---- token cursor -------------------------------------------------

    fn tok(&self, ahead: usize) -> Option<&'s Token> {
        self.tokens.get(self.pos + ahead)
    }

    fn t(&self, ahead: usize) -> &'s str {
        self.tok(ahead).map_or("", |t| &self.text[t.span.clone()])
    }

    fn kind(&self, ahead: usize) -> Option<TokenKind> {
        self.tok(ahead).map(|t| t.kind)
    }

    fn at_eof(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn is(&self, s: &str) -> bool {
        self.t(0) == s && !self.is_literal(0)
    }

    fn is_at(&self, ahead: usize, s: &str) -> bool {
        self.t(ahead) == s && !self.is_literal(ahead)
    }

    fn is_literal(&self, ahead: usize) -> bool {
        matches!(
            self.kind(ahead),
            Some(
                TokenKind::StringLiteral
                    | TokenKind::InterpolatedString
                    | TokenKind::CharLiteral
                    | TokenKind::NumericLiteral
            )
        )
    }

    fn is_ident(&self, ahead: usize) -> bool {
        self.kind(ahead) == Some(TokenKind::Identifier)
    }

    /// Whether the tokens at `ahead` and `ahead + 1` touch with no trivia between.
    fn adjacent(&self, ahead: usize) -> bool {
        match (self.tok(ahead), self.tok(ahead + 1)) {
            (Some(a), Some(b)) => a.span.end == b.span.start,
            _ => false,
        }
    }

    fn bump(&mut self) {
        if !self.at_eof() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> bool {
        if self.eat(s) {
            true
        } else {
            self.diag_here(format!("expected '{s}'"));
            false
        }
    }

    fn diag_here(&mut self, message: String) {
        let span = match self.tok(0) {
            Some(t) => t.span.clone(),
            None => self.text.len()..self.text.len(),
        };
        let message = if self.at_eof() {
            format!("{message}, found end of file")
        } else {
            format!("{message}, found '{}'", self.t(0))
        };
        self.diags.push((span, message));
    }

    fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            pos: self.pos,
            nodes: self.nodes.len(),
            diags: self.diags.len(),
        }
    }

    fn rewind(&mut self, cp: Checkpoint) {
        self.pos = cp.pos;
        self.nodes.truncate(cp.nodes);
        self.diags.truncate(cp.diags);
    }

    // ---- node construction -------------------------------------------

    fn node(&mut self, kind: SyntaxKind, start: usize, children: Vec<NodeId>) -> NodeId {
        debug_assert!(self.pos > start, "zero-width {kind} node");
        let span = self.tokens[start].span.start..self.tokens[self.pos - 1].span.end;
        let id = self.nodes.len() as NodeId;
        self.nodes.push(NodeData {
            kind,
            span,
            tokens: start..self.pos,
            parent: None,
            children,
        });
        id
    }

    fn leaf(&mut self, kind: SyntaxKind) -> NodeId {
        let start = self.pos;
        self.bump();
        self.node(kind, start, Vec::new())
    }

    fn error_token(&mut self, message: &str) -> NodeId {
        self.diag_here(message.to_string());
        self.leaf(SyntaxKind::Error)
    }

    /// Consumes tokens up to (not including) a depth-0 token in `stops`,
    /// keeping brackets balanced. Returns whether anything was consumed.
    fn skip_until(&mut self, stops: &[&str]) -> bool {
        let start = self.pos;
        let mut depth = 0usize;
        while !self.at_eof() {
            if depth == 0 && stops.iter().any(|s| self.is(s)) {
                break;
            }
            match self.t(0) {
                "(" | "[" | "{" if !self.is_literal(0) => depth += 1,
                ")" | "]" | "}" if !self.is_literal(0) => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                _ => {}
            }
            self.bump();
        }
        self.pos > start
    }

    /// At an opening bracket: consumes through its matching closer.
    fn skip_balanced(&mut self) {
        let open = self.t(0);
        let close = match open {
            "(" => ")",
            "[" => "]",
            "{" => "}",
            "<" => ">",
            _ => return,
        };
        let mut depth = 0usize;
        while !self.at_eof() {
            let t = self.t(0);
            if !self.is_literal(0) {
                if t == open {
                    depth += 1;
                } else if t == close {
                    depth -= 1;
                    if depth == 0 {
                        self.bump();
                        return;
                    }
                } else if open == "<" && matches!(t, ";" | "{" | "}" | "(" | ")") {
                    return;
                }
            }
            self.bump();
        }
        self.diags
            .push((self.text.len()..self.text.len(), format!("unclosed '{open}'")));
    }

    // ---- declarations -------------------------------------------------

    fn compilation_unit(&mut self) -> NodeId {
        let children = self.member_list(false);
        let id = self.nodes.len() as NodeId;
        self.nodes.push(NodeData {
            kind: SyntaxKind::CompilationUnit,
            span: 0..self.text.len(),
            tokens: 0..self.tokens.len(),
            parent: None,
            children,
        });
        id
    }

    fn member_list(&mut self, braced: bool) -> Vec<NodeId> {
        let mut out = Vec::new();
        while !self.at_eof() {
            if braced && self.is("}") {
                break;
            }
            let before = self.pos;
            if let Some(n) = self.member() {
                out.push(n);
            }
            if self.pos == before {
                out.push(self.error_token("unexpected token at declaration level"));
            }
        }
        out
    }

    fn is_contextual_modifier(&self, ahead: usize) -> bool {
        CONTEXTUAL_MODIFIERS.contains(&self.t(ahead))
            && self.is_ident(ahead)
            && matches!(self.kind(ahead + 1), Some(TokenKind::Identifier | TokenKind::Keyword))
            && !matches!(self.t(ahead + 1), "is" | "as" | "in")
    }

    fn modifiers(&mut self, out: &mut Vec<NodeId>) {
        loop {
            let is_mod = (self.kind(0) == Some(TokenKind::Keyword) && MEMBER_MODIFIERS.contains(&self.t(0)))
                || self.is_contextual_modifier(0);
            if !is_mod {
                break;
            }
            out.push(self.leaf(SyntaxKind::Modifier));
        }
    }

    fn member(&mut self) -> Option<NodeId> {
        if self.depth > MAX_DEPTH {
            return Some(self.error_token("declarations nested too deeply"));
        }
        self.depth += 1;
        let r = self.member_inner();
        self.depth -= 1;
        r
    }

    fn member_inner(&mut self) -> Option<NodeId> {
        let start = self.pos;
        if self.is("using") && !self.is_at(1, "(") || self.is_ident(0) && self.t(0) == "global" && self.is_at(1, "using") {
            self.skip_until(&[";", "{", "}"]);
            self.eat(";");
            return Some(self.node(SyntaxKind::UsingDirective, start, Vec::new()));
        }
        if self.is("extern") && self.t(1) == "alias" {
            self.skip_until(&[";", "{", "}"]);
            self.eat(";");
            return Some(self.node(SyntaxKind::UsingDirective, start, Vec::new()));
        }
        if self.is("namespace") {
            return Some(self.namespace());
        }
        let mut children = Vec::new();
        while self.is("[") {
            children.push(self.attribute_list());
        }
        self.modifiers(&mut children);
        let decorated = !children.is_empty();

        match self.t(0) {
            "class" | "struct" | "interface" | "enum" if !self.is_literal(0) => {
                return Some(self.type_declaration(start, children));
            }
            "record" if self.is_ident(0) && (self.is_ident(1) || self.is_at(1, "class") || self.is_at(1, "struct")) => {
                return Some(self.type_declaration(start, children));
            }
            "delegate" if !self.is_at(1, "(") && !self.is_at(1, "{") => {
                self.skip_until(&[";", "}"]);
                self.expect(";");
                return Some(self.node(SyntaxKind::DelegateDeclaration, start, children));
            }
            "event" => {
                self.bump();
                self.skip_until(&[";", "{"]);
                if self.is("{") {
                    self.skip_balanced();
                } else {
                    self.expect(";");
                }
                return Some(self.node(SyntaxKind::EventDeclaration, start, children));
            }
            "implicit" | "explicit" => {
                self.skip_until(&["{", "=>", ";"]);
                self.member_body(&mut children);
                return Some(self.node(SyntaxKind::OperatorDeclaration, start, children));
            }
            "~" => {
                self.bump();
                if self.is_ident(0) {
                    children.push(self.leaf(SyntaxKind::Name));
                }
                children.extend(self.parameter_list());
                self.member_body(&mut children);
                return Some(self.node(SyntaxKind::DestructorDeclaration, start, children));
            }
            _ => {}
        }

        // Constructor: an identifier directly followed by its parameter list.
        if self.is_ident(0) && self.is_at(1, "(") && (decorated || self.type_names.contains(&self.t(0))) {
            children.push(self.leaf(SyntaxKind::Name));
            children.extend(self.parameter_list());
            if self.eat(":") {
                if self.is("base") || self.is("this") {
                    self.bump();
                }
                if self.is("(") {
                    children.push(self.argument_list());
                } else {
                    self.diag_here("expected constructor initializer arguments".into());
                }
            }
            self.member_body(&mut children);
            return Some(self.node(SyntaxKind::ConstructorDeclaration, start, children));
        }

        if !decorated && !self.starts_member_type() {
            // top-level statements or stray tokens
            return self.statement();
        }

        let cp = self.checkpoint();
        let type_start = self.pos;
        if !self.scan_type() {
            if decorated {
                self.diag_here("expected member declaration".into());
                return Some(self.node(SyntaxKind::Error, start, children));
            }
            return None;
        }
        children.push(self.node(SyntaxKind::Type, type_start, Vec::new()));

        if self.is("operator") {
            self.skip_until(&["{", "=>", ";"]);
            self.member_body(&mut children);
            return Some(self.node(SyntaxKind::OperatorDeclaration, start, children));
        }
        if self.is("this") && self.is_at(1, "[") {
            self.bump();
            self.skip_balanced();
            self.property_tail(&mut children);
            return Some(self.node(SyntaxKind::IndexerDeclaration, start, children));
        }
        if !self.is_ident(0) {
            if !decorated {
                self.rewind(cp);
                return self.statement();
            }
            self.diag_here("expected member name".into());
            return Some(self.node(SyntaxKind::Error, start, children));
        }
        children.push(self.member_name());
        match self.t(0) {
            "(" | "<" => {
                if self.is("<") {
                    let tp = self.pos;
                    self.skip_balanced();
                    children.push(self.node(SyntaxKind::TypeParameterList, tp, Vec::new()));
                }
                children.extend(self.parameter_list());
                self.constraints(&mut children);
                self.member_body(&mut children);
                Some(self.node(SyntaxKind::MethodDeclaration, start, children))
            }
            "{" | "=>" => {
                self.property_tail(&mut children);
                Some(self.node(SyntaxKind::PropertyDeclaration, start, children))
            }
            _ => {
                // field: first declarator's name is already consumed
                let name = children.pop().expect("member name");
                let decl_start = self.nodes[name as usize].tokens.start;
                let mut dchildren = vec![name];
                self.declarator_tail(&mut dchildren);
                children.push(self.node(SyntaxKind::VariableDeclarator, decl_start, dchildren));
                while self.eat(",") {
                    children.extend(self.variable_declarator());
                }
                self.expect(";");
                Some(self.node(SyntaxKind::FieldDeclaration, start, children))
            }
        }
    }

    /// Whether the cursor can start a member's type (vs. a top-level statement).
    fn starts_member_type(&self) -> bool {
        if PREDEFINED_TYPES.contains(&self.t(0)) && self.kind(0) == Some(TokenKind::Keyword) {
            return true;
        }
        if self.is("(") {
            return false;
        }
        if !self.is_ident(0) {
            return false;
        }
        // `Type Name` or `Type<...>` / `A.B Name`: cheap look-ahead on the shape.
        let mut i = 1;
        loop {
            match self.t(i) {
                "." | "::" if self.is_ident(i + 1) => i += 2,
                "<" | "?" | "[" => return true,
                _ => break,
            }
        }
        self.is_ident(i) || self.is_at(i, "this") || self.is_at(i, "operator")
    }

    fn member_name(&mut self) -> NodeId {
        let start = self.pos;
        self.bump();
        loop {
            if self.is("<") {
                let cp = self.checkpoint();
                if !(self.scan_type_args() && self.is(".")) {
                    self.rewind(cp);
                    break;
                }
            }
            if self.is(".") && self.is_ident(1) {
                self.bump();
                self.bump();
            } else {
                break;
            }
        }
        self.node(SyntaxKind::Name, start, Vec::new())
    }

    fn property_tail(&mut self, children: &mut Vec<NodeId>) {
        if self.is("{") {
            let start = self.pos;
            self.skip_balanced();
            children.push(self.node(SyntaxKind::AccessorList, start, Vec::new()));
            if self.eat("=") {
                children.extend(self.variable_initializer());
                self.expect(";");
            }
        } else if self.is("=>") {
            children.push(self.arrow_clause());
            self.expect(";");
        } else {
            self.diag_here("expected property body".into());
        }
    }

    fn constraints(&mut self, children: &mut Vec<NodeId>) {
        if self.is_ident(0) && self.t(0) == "where" {
            let start = self.pos;
            self.skip_until(&["{", "=>", ";"]);
            children.push(self.node(SyntaxKind::ConstraintClauses, start, Vec::new()));
        }
    }

    fn member_body(&mut self, children: &mut Vec<NodeId>) {
        if self.is("{") {
            children.push(self.block());
        } else if self.is("=>") {
            children.push(self.arrow_clause());
            self.expect(";");
        } else if !self.eat(";") {
            self.diag_here("expected method body".into());
        }
    }

    fn arrow_clause(&mut self) -> NodeId {
        let start = self.pos;
        self.bump();
        let mut children = Vec::new();
        if self.is("ref") {
            self.bump();
        }
        match self.expression() {
            Some(e) => children.push(e),
            None => self.diag_here("expected expression".into()),
        }
        self.node(SyntaxKind::ArrowExpressionClause, start, children)
    }

    fn namespace(&mut self) -> NodeId {
        let start = self.pos;
        self.bump();
        let mut children = Vec::new();
        if self.is_ident(0) {
            let n = self.pos;
            self.skip_until(&["{", ";"]);
            children.push(self.node(SyntaxKind::Name, n, Vec::new()));
        } else {
            self.diag_here("expected namespace name".into());
        }
        if self.eat(";") {
            children.extend(self.member_list(false));
        } else if self.expect("{") {
            children.extend(self.member_list(true));
            self.expect("}");
        }
        self.node(SyntaxKind::NamespaceDeclaration, start, children)
    }

    fn type_declaration(&mut self, start: usize, mut children: Vec<NodeId>) -> NodeId {
        let keyword = self.t(0);
        let kind = match keyword {
            "class" => SyntaxKind::ClassDeclaration,
            "struct" => SyntaxKind::StructDeclaration,
            "interface" => SyntaxKind::InterfaceDeclaration,
            "enum" => SyntaxKind::EnumDeclaration,
            _ => SyntaxKind::RecordDeclaration,
        };
        self.bump();
        if kind == SyntaxKind::RecordDeclaration && (self.is("class") || self.is("struct")) {
            self.bump();
        }
        let name = if self.is_ident(0) {
            let n = self.t(0);
            children.push(self.leaf(SyntaxKind::Name));
            n
        } else {
            self.diag_here("expected type name".into());
            ""
        };
        if self.is("<") {
            let tp = self.pos;
            self.skip_balanced();
            children.push(self.node(SyntaxKind::TypeParameterList, tp, Vec::new()));
        }
        if self.is("(") {
            children.extend(self.parameter_list());
        }
        if self.is(":") {
            children.push(self.base_list());
        }
        self.constraints(&mut children);
        if kind == SyntaxKind::EnumDeclaration {
            if self.is("{") {
                self.skip_balanced();
            } else {
                self.expect("{");
            }
        } else if self.eat("{") {
            self.type_names.push(name);
            children.extend(self.member_list(true));
            self.type_names.pop();
            self.expect("}");
        } else if !self.is(";") {
            self.diag_here("expected type body".into());
        }
        self.eat(";");
        self.node(kind, start, children)
    }

    fn base_list(&mut self) -> NodeId {
        let start = self.pos;
        self.bump();
        let mut children = Vec::new();
        loop {
            let ts = self.pos;
            if !self.scan_type() {
                self.diag_here("expected base type".into());
                self.skip_until(&["{", ";", "where"]);
                break;
            }
            children.push(self.node(SyntaxKind::Type, ts, Vec::new()));
            if self.is("(") {
                children.push(self.argument_list());
            }
            if !self.eat(",") {
                break;
            }
        }
        self.node(SyntaxKind::BaseList, start, children)
    }

    fn attribute_list(&mut self) -> NodeId {
        let start = self.pos;
        self.bump();
        let mut children = Vec::new();
        if (self.is_ident(0) || self.kind(0) == Some(TokenKind::Keyword)) && self.is_at(1, ":") {
            self.bump();
            self.bump();
        }
        while !self.at_eof() && !self.is("]") {
            if self.is_ident(0) {
                children.push(self.attribute());
            } else {
                children.push(self.error_token("expected attribute name"));
                continue;
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect("]");
        self.node(SyntaxKind::AttributeList, start, children)
    }

    fn attribute(&mut self) -> NodeId {
        let start = self.pos;
        let name_start = self.pos;
        self.bump();
        loop {
            if (self.is(".") || self.is("::")) && self.is_ident(1) {
                self.bump();
                self.bump();
            } else if self.is("<") {
                let cp = self.checkpoint();
                if !self.scan_type_args() {
                    self.rewind(cp);
                    break;
                }
            } else {
                break;
            }
        }
        let mut children = vec![self.node(SyntaxKind::Name, name_start, Vec::new())];
        if self.is("(") {
            let list_start = self.pos;
            self.bump();
            let mut args = Vec::new();
            while !self.at_eof() && !self.is(")") && !self.is("]") {
                let arg_start = self.pos;
                let mut arg_children = Vec::new();
                if self.is_ident(0) && (self.is_at(1, "=") || self.is_at(1, ":")) {
                    arg_children.push(self.leaf(SyntaxKind::Name));
                    self.bump();
                }
                match self.expression() {
                    Some(e) => arg_children.push(e),
                    None => {
                        arg_children.push(self.error_token("expected attribute argument"));
                    }
                }
                args.push(self.node(SyntaxKind::AttributeArgument, arg_start, arg_children));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")");
            children.push(self.node(SyntaxKind::AttributeArgumentList, list_start, args));
        }
        self.node(SyntaxKind::Attribute, start, children)
    }

    fn parameter_list(&mut self) -> Option<NodeId> {
        let start = self.pos;
        if !self.is("(") {
            self.diag_here("expected '('".into());
            return None;
        }
        self.bump();
        let mut children = Vec::new();
        while !self.at_eof() && !self.is(")") {
            let p = self.pos;
            if !self.skip_until(&[",", ")", ";", "{", "}", "=>"]) {
                break;
            }
            children.push(self.node(SyntaxKind::Parameter, p, Vec::new()));
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")");
        Some(self.node(SyntaxKind::ParameterList, start, children))
    }

    fn variable_declarator(&mut self) -> Option<NodeId> {
        let start = self.pos;
        let mut children = Vec::new();
        if self.is_ident(0) {
            children.push(self.leaf(SyntaxKind::Name));
        } else {
            self.diag_here("expected variable name".into());
            return None;
        }
        self.declarator_tail(&mut children);
        Some(self.node(SyntaxKind::VariableDeclarator, start, children))
    }

    fn declarator_tail(&mut self, children: &mut Vec<NodeId>) {
        if self.is("[") {
            // fixed-size buffer
            self.skip_balanced();
        }
        if self.eat("=") {
            children.extend(self.variable_initializer());
        }
    }

    fn variable_initializer(&mut self) -> Option<NodeId> {
        if self.is("{") {
            return Some(self.initializer());
        }
        if self.is("ref") {
            self.bump();
        }
        let e = self.expression();
        if e.is_none() {
            self.diag_here("expected initializer".into());
        }
        e
    }

    // ---- types (speculative, no nodes) ---------------------------------

    fn scan_type(&mut self) -> bool {
        if self.depth > MAX_DEPTH {
            return false;
        }
        self.depth += 1;
        let ok = self.scan_type_inner();
        self.depth -= 1;
        ok
    }

    fn scan_type_inner(&mut self) -> bool {
        if self.is("(") {
            let cp = self.checkpoint();
            self.bump();
            let mut count = 0;
            loop {
                if !self.scan_type() {
                    self.rewind(cp);
                    return false;
                }
                count += 1;
                if self.is_ident(0) {
                    self.bump();
                }
                if self.eat(",") {
                    continue;
                }
                if self.eat(")") && count >= 2 {
                    break;
                }
                self.rewind(cp);
                return false;
            }
        } else if self.kind(0) == Some(TokenKind::Keyword) && PREDEFINED_TYPES.contains(&self.t(0)) {
            self.bump();
        } else if self.is_ident(0) {
            self.bump();
            if self.is("::") && self.is_ident(1) {
                self.bump();
                self.bump();
            }
            loop {
                if self.is("<") {
                    let cp = self.checkpoint();
                    if !self.scan_type_args() {
                        self.rewind(cp);
                        break;
                    }
                }
                if self.is(".") && self.is_ident(1) {
                    self.bump();
                    self.bump();
                } else {
                    break;
                }
            }
        } else {
            return false;
        }
        loop {
            if self.is("?") && !self.is_at(1, "?") {
                // `T? x` vs `a ? b : c`: the caller's shape check disambiguates
                self.bump();
            } else if self.is("[") && (self.is_at(1, "]") || self.is_at(1, ",")) {
                let cp = self.checkpoint();
                self.bump();
                while self.eat(",") {}
                if !self.eat("]") {
                    self.rewind(cp);
                    break;
                }
            } else if self.is("*") && matches!(self.t(1), "*" | ">" | "," | ")" | "[") {
                self.bump();
            } else {
                break;
            }
        }
        true
    }

    /// At `<`: consumes a type argument list or returns false (caller rewinds).
    fn scan_type_args(&mut self) -> bool {
        self.bump();
        loop {
            if self.eat(">") {
                return true;
            }
            if self.eat(",") {
                continue;
            }
            if self.is("in") || self.is("out") {
                self.bump();
            }
            if !self.scan_type() {
                return false;
            }
            if self.eat(",") {
                continue;
            }
            return self.eat(">");
        }
    }

    // ---- statements ---------------------------------------------------

    fn block(&mut self) -> NodeId {
        let start = self.pos;
        self.bump();
        let mut children = Vec::new();
        while !self.at_eof() && !self.is("}") {
            if BLOCK_BREAKERS.contains(&self.t(0)) && self.kind(0) == Some(TokenKind::Keyword) {
                break;
            }
            let before = self.pos;
            if let Some(s) = self.statement() {
                children.push(s);
            }
            if self.pos == before {
                children.push(self.error_token("unexpected token in block"));
            }
        }
        self.expect("}");
        self.node(SyntaxKind::Block, start, children)
    }

    fn embedded_statement(&mut self, children: &mut Vec<NodeId>) {
        match self.statement() {
            Some(s) => children.push(s),
            None => self.diag_here("expected statement".into()),
        }
    }

    fn statement(&mut self) -> Option<NodeId> {
        if self.at_eof() {
            return None;
        }
        if self.depth > MAX_DEPTH {
            return Some(self.error_token("statements nested too deeply"));
        }
        self.depth += 1;
        let r = self.statement_inner();
        self.depth -= 1;
        r
    }

    fn paren_condition(&mut self, children: &mut Vec<NodeId>) {
        if self.expect("(") {
            match self.expression() {
                Some(e) => children.push(e),
                None => self.diag_here("expected condition".into()),
            }
            self.expect(")");
        }
    }

    fn statement_inner(&mut self) -> Option<NodeId> {
        use SyntaxKind as K;
        let start = self.pos;
        let mut children = Vec::new();
        if self.is_literal(0) {
            return self.expression_statement();
        }
        match self.t(0) {
            "{" => return Some(self.block()),
            ";" => return Some(self.leaf(K::EmptyStatement)),
            "if" => {
                self.bump();
                self.paren_condition(&mut children);
                self.embedded_statement(&mut children);
                if self.is("else") {
                    let es = self.pos;
                    self.bump();
                    let mut ec = Vec::new();
                    self.embedded_statement(&mut ec);
                    children.push(self.node(K::ElseClause, es, ec));
                }
                return Some(self.node(K::IfStatement, start, children));
            }
            "switch" => {
                self.bump();
                self.paren_condition(&mut children);
                if self.expect("{") {
                    while !self.at_eof() && !self.is("}") {
                        if !(self.is("case") || self.is("default")) {
                            children.push(self.error_token("expected case label"));
                            continue;
                        }
                        children.push(self.switch_section());
                    }
                    self.expect("}");
                }
                return Some(self.node(K::SwitchStatement, start, children));
            }
            "while" => {
                self.bump();
                self.paren_condition(&mut children);
                self.embedded_statement(&mut children);
                return Some(self.node(K::WhileStatement, start, children));
            }
            "do" => {
                self.bump();
                self.embedded_statement(&mut children);
                if self.expect("while") {
                    self.paren_condition(&mut children);
                }
                self.expect(";");
                return Some(self.node(K::DoStatement, start, children));
            }
            "for" => {
                self.bump();
                self.for_header(&mut children);
                self.embedded_statement(&mut children);
                return Some(self.node(K::ForStatement, start, children));
            }
            "foreach" => return Some(self.foreach(start, children)),
            "return" | "throw" => {
                let kind = if self.is("return") { K::ReturnStatement } else { K::ThrowStatement };
                self.bump();
                if self.is("ref") {
                    self.bump();
                }
                if !self.is(";") {
                    match self.expression() {
                        Some(e) => children.push(e),
                        None => self.diag_here("expected expression".into()),
                    }
                }
                self.expect(";");
                return Some(self.node(kind, start, children));
            }
            "break" | "continue" | "goto" if !self.is_literal(0) => {
                self.skip_until(&[";"]);
                self.expect(";");
                return Some(self.node(K::JumpStatement, start, children));
            }
            "try" => {
                self.bump();
                self.expect_block(&mut children);
                while self.is("catch") {
                    let cs = self.pos;
                    self.bump();
                    let mut cc = Vec::new();
                    if self.is("(") {
                        self.skip_balanced();
                    }
                    if self.is_ident(0) && self.t(0) == "when" {
                        self.bump();
                        self.paren_condition(&mut cc);
                    }
                    self.expect_block(&mut cc);
                    children.push(self.node(K::CatchClause, cs, cc));
                }
                if self.is("finally") {
                    let fs = self.pos;
                    self.bump();
                    let mut fc = Vec::new();
                    self.expect_block(&mut fc);
                    children.push(self.node(K::FinallyClause, fs, fc));
                }
                return Some(self.node(K::TryStatement, start, children));
            }
            "lock" | "fixed" => {
                let kind = if self.is("lock") { K::LockStatement } else { K::FixedStatement };
                self.bump();
                if kind == K::FixedStatement {
                    if self.is("(") {
                        self.skip_balanced();
                    }
                } else {
                    self.paren_condition(&mut children);
                }
                self.embedded_statement(&mut children);
                return Some(self.node(kind, start, children));
            }
            "checked" | "unchecked" | "unsafe" if self.is_at(1, "{") => {
                let kind = if self.is("unsafe") { K::UnsafeStatement } else { K::CheckedStatement };
                self.bump();
                children.push(self.block());
                return Some(self.node(kind, start, children));
            }
            "using" if self.is_at(1, "(") => {
                self.bump();
                self.using_header(&mut children);
                self.embedded_statement(&mut children);
                return Some(self.node(K::UsingStatement, start, children));
            }
            "await" if self.is_ident(0) && self.is_at(1, "using") && self.is_at(2, "(") => {
                self.bump();
                self.bump();
                self.using_header(&mut children);
                self.embedded_statement(&mut children);
                return Some(self.node(K::UsingStatement, start, children));
            }
            "await" if self.is_ident(0) && self.is_at(1, "foreach") => {
                self.bump();
                return Some(self.foreach(start, children));
            }
            "yield" if self.is_ident(0) && (self.is_at(1, "return") || self.is_at(1, "break")) => {
                self.bump();
                let is_return = self.is("return");
                self.bump();
                if is_return {
                    match self.expression() {
                        Some(e) => children.push(e),
                        None => self.diag_here("expected expression".into()),
                    }
                }
                self.expect(";");
                return Some(self.node(K::YieldStatement, start, children));
            }
            "else" | "case" | "catch" | "finally" | ")" | "]" => return None,
            _ => {}
        }
        if self.is_ident(0) && self.is_at(1, ":") && !self.is_at(2, ":") {
            self.bump();
            self.bump();
            self.embedded_statement(&mut children);
            return Some(self.node(K::LabeledStatement, start, children));
        }
        if let Some(decl) = self.local_declaration_or_function() {
            return Some(decl);
        }
        if BLOCK_BREAKERS.contains(&self.t(0)) && self.kind(0) == Some(TokenKind::Keyword) {
            return None;
        }
        self.expression_statement()
    }

    fn expect_block(&mut self, children: &mut Vec<NodeId>) {
        if self.is("{") {
            children.push(self.block());
        } else {
            self.diag_here("expected '{'".into());
        }
    }

    fn expression_statement(&mut self) -> Option<NodeId> {
        let start = self.pos;
        let e = self.expression()?;
        if !self.eat(";") {
            self.diag_here("expected ';'".into());
        }
        Some(self.node(SyntaxKind::ExpressionStatement, start, vec![e]))
    }

    fn switch_section(&mut self) -> NodeId {
        let start = self.pos;
        let mut children = Vec::new();
        while self.is("case") || (self.is("default") && self.is_at(1, ":")) {
            let ls = self.pos;
            let mut lc = Vec::new();
            if self.eat("case") {
                let ps = self.pos;
                if self.skip_until(&[":", "when", ";"]) {
                    lc.push(self.node(SyntaxKind::Pattern, ps, Vec::new()));
                }
                if self.is_ident(0) && self.t(0) == "when" {
                    self.bump();
                    if let Some(e) = self.expression() {
                        lc.push(e);
                    }
                }
            } else {
                self.bump();
            }
            self.expect(":");
            children.push(self.node(SyntaxKind::SwitchLabel, ls, lc));
        }
        if self.pos == start {
            // a lone `default` not followed by ':'
            children.push(self.error_token("expected ':' after default"));
        }
        while !self.at_eof() && !self.is("}") && !self.is("case") && !(self.is("default") && self.is_at(1, ":")) {
            if BLOCK_BREAKERS.contains(&self.t(0)) && self.kind(0) == Some(TokenKind::Keyword) {
                break;
            }
            let before = self.pos;
            if let Some(s) = self.statement() {
                children.push(s);
            }
            if self.pos == before {
                children.push(self.error_token("unexpected token in switch section"));
            }
        }
        self.node(SyntaxKind::SwitchSection, start, children)
    }

    fn for_header(&mut self, children: &mut Vec<NodeId>) {
        if !self.expect("(") {
            return;
        }
        // initializer: a declaration or expression list
        if !self.is(";") {
            let ds = self.pos;
            let cp = self.checkpoint();
            let mut decl = Vec::new();
            if self.scan_type() && self.is_ident(0) && matches!(self.t(1), "=" | "," | ";") {
                let mut dc = vec![self.node(SyntaxKind::Type, ds, Vec::new())];
                dc.extend(self.variable_declarator());
                while self.eat(",") {
                    dc.extend(self.variable_declarator());
                }
                decl.push(self.node(SyntaxKind::DeclarationExpression, ds, dc));
            } else {
                self.rewind(cp);
                self.expression_list(&mut decl, &[";"]);
            }
            children.extend(decl);
        }
        self.expect(";");
        if !self.is(";") {
            if let Some(e) = self.expression() {
                children.push(e);
            }
        }
        self.expect(";");
        if !self.is(")") {
            self.expression_list(children, &[")"]);
        }
        self.expect(")");
    }

    fn expression_list(&mut self, out: &mut Vec<NodeId>, stops: &[&str]) {
        loop {
            match self.expression() {
                Some(e) => out.push(e),
                None => {
                    if !stops.iter().any(|s| self.is(s)) && !self.at_eof() && !self.is("{") && !self.is("}") {
                        out.push(self.error_token("expected expression"));
                    }
                    break;
                }
            }
            if !self.eat(",") {
                break;
            }
        }
    }

    fn foreach(&mut self, start: usize, mut children: Vec<NodeId>) -> NodeId {
        self.bump();
        if self.expect("(") {
            let vs = self.pos;
            if self.skip_until(&["in", ";", ")"]) {
                children.push(self.node(SyntaxKind::DeclarationExpression, vs, Vec::new()));
            }
            if self.expect("in") {
                match self.expression() {
                    Some(e) => children.push(e),
                    None => self.diag_here("expected expression".into()),
                }
            }
            self.expect(")");
        }
        self.embedded_statement(&mut children);
        self.node(SyntaxKind::ForEachStatement, start, children)
    }

    fn using_header(&mut self, children: &mut Vec<NodeId>) {
        self.bump(); // (
        let ds = self.pos;
        let cp = self.checkpoint();
        if self.scan_type() && self.is_ident(0) && self.is_at(1, "=") {
            let mut dc = vec![self.node(SyntaxKind::Type, ds, Vec::new())];
            dc.extend(self.variable_declarator());
            while self.eat(",") {
                dc.extend(self.variable_declarator());
            }
            children.push(self.node(SyntaxKind::DeclarationExpression, ds, dc));
        } else {
            self.rewind(cp);
            match self.expression() {
                Some(e) => children.push(e),
                None => self.diag_here("expected resource".into()),
            }
        }
        self.expect(")");
    }

    fn local_declaration_or_function(&mut self) -> Option<NodeId> {
        let start = self.pos;
        let cp = self.checkpoint();
        let mut children = Vec::new();
        loop {
            let t = self.t(0);
            let modifier = match t {
                "const" | "static" | "readonly" | "extern" | "volatile" => self.kind(0) == Some(TokenKind::Keyword),
                "unsafe" => self.kind(0) == Some(TokenKind::Keyword) && !self.is_at(1, "{"),
                "ref" => !self.is_at(1, "("),
                "using" => !self.is_at(1, "("),
                "await" => self.is_ident(0) && self.is_at(1, "using"),
                "async" | "scoped" => self.is_contextual_modifier(0),
                _ => false,
            };
            if !modifier {
                break;
            }
            children.push(self.leaf(SyntaxKind::Modifier));
        }
        let type_start = self.pos;
        // deconstruction: var (a, b) = ...
        if self.is_ident(0) && self.t(0) == "var" && self.is_at(1, "(") {
            self.bump();
            self.skip_balanced();
            if self.is("=") {
                children.push(self.node(SyntaxKind::DeclarationExpression, type_start, Vec::new()));
                self.bump();
                match self.expression() {
                    Some(e) => children.push(e),
                    None => self.diag_here("expected expression".into()),
                }
                self.expect(";");
                return Some(self.node(SyntaxKind::LocalDeclarationStatement, start, children));
            }
            self.rewind(cp);
            return None;
        }
        if matches!(self.t(0), "await" | "yield" | "nameof" | "from") && self.is_ident(0) && children.is_empty() {
            return None;
        }
        if !self.scan_type() {
            self.rewind(cp);
            return None;
        }
        if !self.is_ident(0) {
            self.rewind(cp);
            return None;
        }
        let after = self.t(1);
        let local_function = matches!(after, "(" | "<") && !self.is_literal(1);
        let declaration = matches!(after, "=" | ";" | "," | "[") && !self.is_literal(1);
        if !local_function && !declaration {
            self.rewind(cp);
            return None;
        }
        children.push(self.node(SyntaxKind::Type, type_start, Vec::new()));
        if local_function {
            children.push(self.leaf(SyntaxKind::Name));
            if self.is("<") {
                let tp = self.pos;
                self.skip_balanced();
                children.push(self.node(SyntaxKind::TypeParameterList, tp, Vec::new()));
            }
            children.extend(self.parameter_list());
            self.constraints(&mut children);
            self.member_body(&mut children);
            return Some(self.node(SyntaxKind::LocalFunctionStatement, start, children));
        }
        children.extend(self.variable_declarator());
        while self.eat(",") {
            children.extend(self.variable_declarator());
        }
        self.expect(";");
        Some(self.node(SyntaxKind::LocalDeclarationStatement, start, children))
    }

    // ---- expressions --------------------------------------------------

    fn expression(&mut self) -> Option<NodeId> {
        if self.at_eof() {
            return None;
        }
        if self.depth > MAX_DEPTH {
            return Some(self.error_token("expression nested too deeply"));
        }
        self.depth += 1;
        let r = self.assignment();
        self.depth -= 1;
        r
    }

    fn assignment_op_len(&self) -> usize {
        if self.is_literal(0) {
            return 0;
        }
        match self.t(0) {
            "=" | "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=" | "<<=" | "??=" => 1,
            // `>>=` and `>>>=` arrive as adjacent `>` tokens
            ">" if self.adjacent(0) && self.is_at(1, ">=") => 2,
            ">" if self.adjacent(0) && self.is_at(1, ">") && self.adjacent(1) && self.is_at(2, ">=") => 3,
            _ => 0,
        }
    }

    fn assignment(&mut self) -> Option<NodeId> {
        let start = self.pos;
        if self.is_lambda_start() {
            return Some(self.lambda());
        }
        let lhs = self.conditional()?;
        let op = self.assignment_op_len();
        if op == 0 {
            return Some(lhs);
        }
        for _ in 0..op {
            self.bump();
        }
        let mut children = vec![lhs];
        if self.is("ref") {
            self.bump();
        }
        if self.is("{") {
            // array initializer in an assignment position
            children.push(self.initializer());
        } else {
            match self.expression() {
                Some(r) => children.push(r),
                None => self.diag_here("expected expression".into()),
            }
        }
        Some(self.node(SyntaxKind::AssignmentExpression, start, children))
    }

    fn conditional(&mut self) -> Option<NodeId> {
        let start = self.pos;
        let cond = self.binary(1)?;
        if !self.is("?") {
            return Some(cond);
        }
        self.bump();
        let mut children = vec![cond];
        if self.is("ref") {
            self.bump();
        }
        match self.expression() {
            Some(e) => children.push(e),
            None => self.diag_here("expected expression".into()),
        }
        if self.expect(":") {
            if self.is("ref") {
                self.bump();
            }
            match self.expression() {
                Some(e) => children.push(e),
                None => self.diag_here("expected expression".into()),
            }
        }
        Some(self.node(SyntaxKind::ConditionalExpression, start, children))
    }

    /// (precedence, token count, right-associative) of the binary operator at the cursor.
    fn binary_op(&self) -> Option<(u8, usize, bool)> {
        if self.is_literal(0) {
            return None;
        }
        let op = match self.t(0) {
            "??" => (1, 1, true),
            "||" => (2, 1, false),
            "&&" => (3, 1, false),
            "|" => (4, 1, false),
            "^" => (5, 1, false),
            "&" => (6, 1, false),
            "==" | "!=" => (7, 1, false),
            "<" | "<=" | ">=" | "is" | "as" => (8, 1, false),
            ">" => {
                if self.adjacent(0) && self.is_at(1, ">") {
                    if self.adjacent(1) && self.is_at(2, ">") {
                        (9, 3, false)
                    } else if self.adjacent(1) && (self.is_at(2, ">=") || self.is_at(2, "=")) {
                        return None;
                    } else {
                        (9, 2, false)
                    }
                } else if self.adjacent(0) && self.is_at(1, ">=") {
                    return None;
                } else {
                    (8, 1, false)
                }
            }
            "<<" => (9, 1, false),
            "+" | "-" => (10, 1, false),
            "*" | "/" | "%" => (11, 1, false),
            "switch" if self.is_at(1, "{") => (12, 1, false),
            ".." => (13, 1, false),
            "with" if self.is_ident(0) && self.is_at(1, "{") => (14, 1, false),
            _ => return None,
        };
        Some(op)
    }

    fn binary(&mut self, min_prec: u8) -> Option<NodeId> {
        let start = self.pos;
        let mut left = self.unary()?;
        while let Some((prec, len, right_assoc)) = self.binary_op() {
            if prec < min_prec {
                break;
            }
            match self.t(0) {
                "is" => {
                    self.bump();
                    let ps = self.pos;
                    let mut children = vec![left];
                    if self.skip_until(&[")", "]", "}", ";", ",", "&&", "||", "?", ":", "??", "==", "!=", "=>", "="]) {
                        children.push(self.node(SyntaxKind::Pattern, ps, Vec::new()));
                    } else {
                        self.diag_here("expected pattern".into());
                    }
                    left = self.node(SyntaxKind::IsPatternExpression, start, children);
                }
                "as" => {
                    self.bump();
                    let ts = self.pos;
                    let mut children = vec![left];
                    if self.scan_type() {
                        children.push(self.node(SyntaxKind::Type, ts, Vec::new()));
                    } else {
                        self.diag_here("expected type".into());
                    }
                    left = self.node(SyntaxKind::BinaryExpression, start, children);
                }
                "switch" => {
                    left = self.switch_expression(start, left);
                }
                "with" => {
                    self.bump();
                    let init = self.initializer();
                    left = self.node(SyntaxKind::WithExpression, start, vec![left, init]);
                }
                ".." => {
                    self.bump();
                    let mut children = vec![left];
                    if self.starts_expression() {
                        if let Some(r) = self.binary(prec + 1) {
                            children.push(r);
                        }
                    }
                    left = self.node(SyntaxKind::RangeExpression, start, children);
                }
                _ => {
                    for _ in 0..len {
                        self.bump();
                    }
                    let next = if right_assoc { prec } else { prec + 1 };
                    let mut children = vec![left];
                    match self.binary(next) {
                        Some(r) => children.push(r),
                        None => self.diag_here("expected operand".into()),
                    }
                    left = self.node(SyntaxKind::BinaryExpression, start, children);
                }
            }
        }
        Some(left)
    }

    fn switch_expression(&mut self, start: usize, governing: NodeId) -> NodeId {
        self.bump(); // switch
        self.bump(); // {
        let mut children = vec![governing];
        while !self.at_eof() && !self.is("}") {
            let arm = self.pos;
            let mut ac = Vec::new();
            if self.skip_until(&["=>", "when", ",", ";"]) {
                ac.push(self.node(SyntaxKind::Pattern, arm, Vec::new()));
            }
            if self.is_ident(0) && self.t(0) == "when" {
                self.bump();
                if let Some(e) = self.expression() {
                    ac.push(e);
                }
            }
            if self.expect("=>") {
                match self.expression() {
                    Some(e) => ac.push(e),
                    None => self.diag_here("expected expression".into()),
                }
            }
            if self.pos == arm {
                children.push(self.error_token("unexpected token in switch expression"));
                continue;
            }
            children.push(self.node(SyntaxKind::SwitchExpressionArm, arm, ac));
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}");
        self.node(SyntaxKind::SwitchExpression, start, children)
    }

    fn starts_expression(&self) -> bool {
        match self.kind(0) {
            None => false,
            Some(TokenKind::Identifier)
            | Some(TokenKind::NumericLiteral)
            | Some(TokenKind::StringLiteral)
            | Some(TokenKind::InterpolatedString)
            | Some(TokenKind::CharLiteral) => true,
            Some(TokenKind::Keyword) => matches!(
                self.t(0),
                "new" | "this" | "base" | "true" | "false" | "null" | "default" | "typeof" | "sizeof"
                    | "checked" | "unchecked" | "throw" | "ref" | "delegate" | "stackalloc"
            ) || PREDEFINED_TYPES.contains(&self.t(0)),
            Some(TokenKind::Punct) => matches!(self.t(0), "(" | "[" | "!" | "~" | "-" | "+" | "++" | "--" | "^" | "&" | "*" | ".."),
            Some(TokenKind::Unknown) => false,
        }
    }

    fn unary(&mut self) -> Option<NodeId> {
        use SyntaxKind as K;
        let start = self.pos;
        if self.depth > MAX_DEPTH {
            return Some(self.error_token("expression nested too deeply"));
        }
        self.depth += 1;
        let r = (|| {
            if !self.is_literal(0) {
                match self.t(0) {
                    "+" | "-" | "!" | "~" | "++" | "--" | "&" | "*" | "^" => {
                        self.bump();
                        let mut children = Vec::new();
                        match self.unary() {
                            Some(o) => children.push(o),
                            None => self.diag_here("expected operand".into()),
                        }
                        return Some(self.node(K::PrefixUnaryExpression, start, children));
                    }
                    ".." => {
                        self.bump();
                        let mut children = Vec::new();
                        if self.starts_expression() {
                            if let Some(o) = self.binary(14) {
                                children.push(o);
                            }
                        }
                        return Some(self.node(K::RangeExpression, start, children));
                    }
                    "throw" | "ref" => {
                        let kind = if self.is("throw") { K::ThrowExpression } else { K::RefExpression };
                        self.bump();
                        let mut children = Vec::new();
                        match self.expression() {
                            Some(o) => children.push(o),
                            None => self.diag_here("expected expression".into()),
                        }
                        return Some(self.node(kind, start, children));
                    }
                    "await" if self.is_ident(0) && self.await_is_operator() => {
                        self.bump();
                        let mut children = Vec::new();
                        match self.unary() {
                            Some(o) => children.push(o),
                            None => self.diag_here("expected operand".into()),
                        }
                        return Some(self.node(K::AwaitExpression, start, children));
                    }
                    "(" if self.looks_like_cast() => {
                        self.bump();
                        let ts = self.pos;
                        self.scan_type();
                        let ty = self.node(K::Type, ts, Vec::new());
                        self.bump(); // )
                        let mut children = vec![ty];
                        match self.unary() {
                            Some(o) => children.push(o),
                            None => self.diag_here("expected cast operand".into()),
                        }
                        return Some(self.node(K::CastExpression, start, children));
                    }
                    _ => {}
                }
            }
            let p = self.primary()?;
            Some(self.postfix(start, p))
        })();
        self.depth -= 1;
        r
    }

    fn await_is_operator(&self) -> bool {
        if self.is_literal(1) {
            return true;
        }
        match self.kind(1) {
            Some(TokenKind::Identifier) => true,
            Some(TokenKind::Keyword) => matches!(
                self.t(1),
                "new" | "this" | "base" | "typeof" | "default" | "checked" | "true" | "false" | "null"
            ) || PREDEFINED_TYPES.contains(&self.t(1)),
            Some(TokenKind::Punct) => matches!(self.t(1), "(" | "[" | "!" | "-" | "~"),
            _ => false,
        }
    }

    fn looks_like_cast(&mut self) -> bool {
        let cp = self.checkpoint();
        self.bump();
        let type_start = self.pos;
        if !(self.scan_type() && self.is(")")) {
            self.rewind(cp);
            return false;
        }
        let simple_name = self.pos == type_start + 1 && self.kind(0).is_some() && self.tokens[type_start].kind == TokenKind::Identifier;
        let predefined = self.pos == type_start + 1 && self.tokens[type_start].kind == TokenKind::Keyword;
        self.bump(); // )
        let result = match self.kind(0) {
            Some(TokenKind::Identifier) => !matches!(self.t(0), "when" | "with" | "and" | "or" | "switch"),
            Some(TokenKind::NumericLiteral)
            | Some(TokenKind::StringLiteral)
            | Some(TokenKind::InterpolatedString)
            | Some(TokenKind::CharLiteral) => true,
            Some(TokenKind::Keyword) => !matches!(self.t(0), "is" | "as" | "switch" | "in"),
            Some(TokenKind::Punct) => match self.t(0) {
                "~" | "!" => true,
                // `(a)(b)` reads as an invocation unless the type is unmistakable
                "(" => !simple_name,
                "-" | "+" | "&" | "*" => predefined,
                _ => false,
            },
            _ => false,
        };
        self.rewind(cp);
        result
    }

    fn is_lambda_start(&self) -> bool {
        let mut i = 0;
        while matches!(self.t(i), "async" | "static") && (self.is_ident(i) || self.t(i) == "static") {
            if self.is_at(i + 1, "=>") {
                // `async => ...` names a parameter called async
                break;
            }
            i += 1;
        }
        if self.is_ident(i) && self.is_at(i + 1, "=>") {
            return true;
        }
        if !self.is_at(i, "(") {
            return false;
        }
        let mut depth = 0usize;
        let mut j = i;
        while let Some(tok) = self.tok(j) {
            let t = &self.text[tok.span.clone()];
            let literal = self.is_literal(j);
            if !literal && matches!(t, "(" | "[" | "{") {
                depth += 1;
            } else if !literal && matches!(t, ")" | "]" | "}") {
                depth -= 1;
                if depth == 0 {
                    return self.is_at(j + 1, "=>");
                }
            } else if !literal && t == ";" {
                return false;
            }
            j += 1;
        }
        false
    }

    fn lambda(&mut self) -> NodeId {
        let start = self.pos;
        let mut children = Vec::new();
        while !self.is_at(1, "=>") && matches!(self.t(0), "async" | "static") {
            children.push(self.leaf(SyntaxKind::Modifier));
        }
        if self.is("(") {
            children.extend(self.parameter_list());
        } else {
            children.push(self.leaf(SyntaxKind::Parameter));
        }
        self.expect("=>");
        if self.is("{") {
            children.push(self.block());
        } else {
            if self.is("ref") {
                self.bump();
            }
            match self.expression() {
                Some(e) => children.push(e),
                None => self.diag_here("expected lambda body".into()),
            }
        }
        self.node(SyntaxKind::LambdaExpression, start, children)
    }

    fn primary(&mut self) -> Option<NodeId> {
        use SyntaxKind as K;
        let start = self.pos;
        match self.kind(0)? {
            TokenKind::NumericLiteral => return Some(self.leaf(K::NumericLiteral)),
            TokenKind::StringLiteral => return Some(self.leaf(K::StringLiteral)),
            TokenKind::InterpolatedString => return Some(self.leaf(K::InterpolatedString)),
            TokenKind::CharLiteral => return Some(self.leaf(K::CharLiteral)),
            TokenKind::Unknown => return None,
            TokenKind::Identifier => return Some(self.identifier_expression()),
            TokenKind::Keyword | TokenKind::Punct => {}
        }
        let t = self.t(0);
        match t {
            "true" | "false" => Some(self.leaf(K::BooleanLiteral)),
            "null" => Some(self.leaf(K::NullLiteral)),
            "this" => Some(self.leaf(K::ThisExpression)),
            "base" => Some(self.leaf(K::BaseExpression)),
            "default" => {
                self.bump();
                if self.is("(") {
                    self.skip_balanced();
                }
                Some(self.node(K::DefaultExpression, start, Vec::new()))
            }
            "typeof" | "sizeof" | "__makeref" => {
                self.bump();
                if self.is("(") {
                    self.skip_balanced();
                } else {
                    self.diag_here("expected '('".into());
                }
                Some(self.node(K::TypeOfExpression, start, Vec::new()))
            }
            "checked" | "unchecked" => {
                self.bump();
                let mut children = Vec::new();
                self.paren_condition(&mut children);
                Some(self.node(K::CheckedExpression, start, children))
            }
            "new" => Some(self.creation()),
            "stackalloc" => {
                self.bump();
                self.scan_type();
                if self.is("[") {
                    self.skip_balanced();
                }
                let mut children = Vec::new();
                if self.is("{") {
                    children.push(self.initializer());
                }
                Some(self.node(K::StackAllocExpression, start, children))
            }
            "delegate" => {
                self.bump();
                let mut children = Vec::new();
                if self.is("(") {
                    children.extend(self.parameter_list());
                }
                self.expect_block(&mut children);
                Some(self.node(K::AnonymousMethodExpression, start, children))
            }
            "(" => Some(self.parenthesized()),
            "[" => {
                self.bump();
                let mut children = Vec::new();
                while !self.at_eof() && !self.is("]") {
                    match self.expression() {
                        Some(e) => children.push(e),
                        None => {
                            if self.is(";") || self.is("}") || self.is("{") {
                                break;
                            }
                            children.push(self.error_token("expected collection element"));
                        }
                    }
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect("]");
                Some(self.node(K::CollectionExpression, start, children))
            }
            _ if PREDEFINED_TYPES.contains(&t) && self.kind(0) == Some(TokenKind::Keyword) => {
                Some(self.leaf(K::PredefinedType))
            }
            _ => {
                self.diag_here("expected expression".into());
                None
            }
        }
    }

    fn identifier_expression(&mut self) -> NodeId {
        use SyntaxKind as K;
        let start = self.pos;
        if self.t(0) == "from" && self.is_query_start() {
            self.skip_until(&[";", ","]);
            return self.node(K::QueryExpression, start, Vec::new());
        }
        self.bump();
        if self.is("::") && self.is_ident(1) {
            self.bump();
            self.bump();
        }
        if self.is("<") {
            let cp = self.checkpoint();
            let args_start = self.pos;
            if self.scan_type_args() && self.generic_follows() {
                let name = self.node(K::IdentifierName, start, Vec::new());
                // the identifier node must not include the type arguments
                let name_span_end = self.tokens[args_start - 1].span.end;
                self.nodes[name as usize].span.end = name_span_end;
                self.nodes[name as usize].tokens.end = args_start;
                let args = self.node(K::TypeArgumentList, args_start, Vec::new());
                return self.node(K::GenericName, start, vec![name, args]);
            }
            self.rewind(cp);
        }
        self.node(K::IdentifierName, start, Vec::new())
    }

    fn is_query_start(&self) -> bool {
        // from x in ... | from T x in ...
        self.is_ident(1) && (self.is_at(2, "in") || self.is_ident(2) && self.is_at(3, "in"))
    }

    fn generic_follows(&self) -> bool {
        if self.at_eof() {
            return true;
        }
        if self.is_literal(0) {
            return false;
        }
        matches!(
            self.t(0),
            "(" | ")" | "]" | "}" | ":" | ";" | "," | "." | "?" | "?." | "==" | "!=" | "|" | "^" | "&&" | "||" | "&" | "[" | "=>" | ">" | "{"
        ) || self.is("is") || self.is("as")
    }

    fn parenthesized(&mut self) -> NodeId {
        let start = self.pos;
        self.bump();
        let mut children = Vec::new();
        let mut commas = 0;
        while !self.at_eof() && !self.is(")") {
            if self.is_ident(0) && self.is_at(1, ":") && !self.is_at(2, ":") {
                // named tuple element
                self.bump();
                self.bump();
            }
            let cp = self.checkpoint();
            let decl_start = self.pos;
            if self.scan_type() && self.is_ident(0) && matches!(self.t(1), "," | ")") {
                let ty = self.node(SyntaxKind::Type, decl_start, Vec::new());
                let name = self.leaf(SyntaxKind::Name);
                children.push(self.node(SyntaxKind::DeclarationExpression, decl_start, vec![ty, name]));
            } else {
                self.rewind(cp);
                match self.expression() {
                    Some(e) => children.push(e),
                    None => {
                        if self.is(";") || self.is("{") || self.is("}") || self.at_eof() {
                            break;
                        }
                        children.push(self.error_token("expected expression"));
                    }
                }
            }
            if !self.eat(",") {
                break;
            }
            commas += 1;
        }
        self.expect(")");
        let kind = if commas == 0 && children.len() <= 1 {
            SyntaxKind::ParenthesizedExpression
        } else {
            SyntaxKind::TupleExpression
        };
        self.node(kind, start, children)
    }

    fn creation(&mut self) -> NodeId {
        use SyntaxKind as K;
        let start = self.pos;
        self.bump(); // new
        let mut children = Vec::new();
        if self.is("[") {
            self.skip_balanced();
            if self.is("{") {
                children.push(self.initializer());
            }
            return self.node(K::ArrayCreationExpression, start, children);
        }
        if self.is("{") {
            children.push(self.initializer());
            return self.node(K::AnonymousObjectCreationExpression, start, children);
        }
        if self.is("(") {
            children.push(self.argument_list());
            if self.is("{") {
                children.push(self.initializer());
            }
            return self.node(K::ObjectCreationExpression, start, children);
        }
        let ts = self.pos;
        if !self.scan_type() {
            self.diag_here("expected type after 'new'".into());
            return self.node(K::ObjectCreationExpression, start, children);
        }
        let array_type = self.t_prev() == "]";
        children.push(self.node(K::Type, ts, Vec::new()));
        if self.is("[") {
            children.push(self.bracketed_argument_list());
            while self.is("[") {
                self.skip_balanced();
            }
            if self.is("{") {
                children.push(self.initializer());
            }
            return self.node(K::ArrayCreationExpression, start, children);
        }
        if array_type {
            if self.is("{") {
                children.push(self.initializer());
            }
            return self.node(K::ArrayCreationExpression, start, children);
        }
        if self.is("(") {
            children.push(self.argument_list());
        }
        if self.is("{") {
            children.push(self.initializer());
        }
        self.node(K::ObjectCreationExpression, start, children)
    }

    fn t_prev(&self) -> &'s str {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.tokens.get(i))
            .map_or("", |t| &self.text[t.span.clone()])
    }

    fn initializer(&mut self) -> NodeId {
        let start = self.pos;
        self.bump(); // {
        let mut children = Vec::new();
        while !self.at_eof() && !self.is("}") {
            if self.is("{") {
                children.push(self.initializer());
            } else {
                match self.expression() {
                    Some(e) => children.push(e),
                    None => {
                        if self.is(";") || BLOCK_BREAKERS.contains(&self.t(0)) {
                            break;
                        }
                        children.push(self.error_token("expected initializer element"));
                    }
                }
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}");
        self.node(SyntaxKind::InitializerExpression, start, children)
    }

    fn argument_list(&mut self) -> NodeId {
        self.arguments(SyntaxKind::ArgumentList, ")")
    }

    fn bracketed_argument_list(&mut self) -> NodeId {
        self.arguments(SyntaxKind::BracketedArgumentList, "]")
    }

    fn arguments(&mut self, kind: SyntaxKind, close: &str) -> NodeId {
        let start = self.pos;
        self.bump();
        let mut children = Vec::new();
        while !self.at_eof() && !self.is(close) {
            let arg_start = self.pos;
            if self.is(";") || self.is("{") || self.is("}") {
                break;
            }
            if self.is_ident(0) && self.is_at(1, ":") && !self.is_at(2, ":") {
                self.bump();
                self.bump();
            }
            let has_modifier = matches!(self.t(0), "ref" | "out" | "in") && self.kind(0) == Some(TokenKind::Keyword);
            if has_modifier {
                self.bump();
            }
            let mut ac = Vec::new();
            let cp = self.checkpoint();
            let decl_start = self.pos;
            if has_modifier && self.scan_type() && self.is_ident(0) && matches!(self.t(1), "," | ")") {
                let ty = self.node(SyntaxKind::Type, decl_start, Vec::new());
                let name = self.leaf(SyntaxKind::Name);
                ac.push(self.node(SyntaxKind::DeclarationExpression, decl_start, vec![ty, name]));
            } else {
                self.rewind(cp);
                match self.expression() {
                    Some(e) => ac.push(e),
                    None => {
                        if self.is(",") {
                            self.diag_here("expected argument".into());
                        } else if self.is(close) || self.is(";") || self.is("{") || self.is("}") {
                            if self.pos > arg_start {
                                children.push(self.node(SyntaxKind::Argument, arg_start, ac));
                            }
                            break;
                        } else {
                            ac.push(self.error_token("expected argument"));
                        }
                    }
                }
            }
            if self.pos > arg_start {
                children.push(self.node(SyntaxKind::Argument, arg_start, ac));
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(close);
        self.node(kind, start, children)
    }

    fn postfix(&mut self, start: usize, mut expr: NodeId) -> NodeId {
        use SyntaxKind as K;
        loop {
            if self.is_literal(0) {
                break;
            }
            match self.t(0) {
                "." | "?." | "->" => {
                    self.bump();
                    let mut children = vec![expr];
                    if self.is_ident(0) || self.kind(0) == Some(TokenKind::Keyword) && PREDEFINED_TYPES.contains(&self.t(0)) {
                        children.push(self.identifier_expression());
                    } else {
                        self.diag_here("expected member name".into());
                    }
                    expr = self.node(K::MemberAccessExpression, start, children);
                }
                "?" if self.is_at(1, "[") && self.adjacent(0) => {
                    self.bump();
                    let args = self.bracketed_argument_list();
                    expr = self.node(K::ElementAccessExpression, start, vec![expr, args]);
                }
                "(" => {
                    let args = self.argument_list();
                    expr = self.node(K::InvocationExpression, start, vec![expr, args]);
                }
                "[" => {
                    let args = self.bracketed_argument_list();
                    expr = self.node(K::ElementAccessExpression, start, vec![expr, args]);
                }
                "++" | "--" => {
                    self.bump();
                    expr = self.node(K::PostfixUnaryExpression, start, vec![expr]);
                }
                "!" if !matches!(self.kind(1), Some(TokenKind::Identifier) | Some(TokenKind::NumericLiteral)) => {
                    self.bump();
                    expr = self.node(K::PostfixUnaryExpression, start, vec![expr]);
                }
                _ => break,
            }
        }
        expr
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::SyntaxNode;

    fn parse(src: &str) -> (SyntaxTree, Vec<ParseDiagnostic>) {
        parse_text("t.cs", src)
    }

    fn outline(node: &SyntaxNode, depth: usize, out: &mut String) {
        out.push_str(&format!("{}{} {:?}\n", "  ".repeat(depth), node.kind(), node.text()));
        for c in node.children() {
            outline(&c, depth + 1, out);
        }
    }

    fn kinds_in(src: &str, kind: SyntaxKind) -> Vec<String> {
        let (tree, _) = parse(src);
        tree.root()
            .find_descendants(&[kind])
            .iter()
            .map(|n| n.text().to_string())
            .collect()
    }

    #[test]
    fn minimal_class() {
        let (tree, diags) = parse("class A { }");
        assert!(diags.is_empty(), "{diags:?}");
        let classes: Vec<_> = tree.root().children().collect();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].kind(), SyntaxKind::ClassDeclaration);
    }

    #[test]
    fn empty_input() {
        let (tree, diags) = parse("");
        assert!(diags.is_empty());
        assert_eq!(tree.root().kind(), SyntaxKind::CompilationUnit);
        assert_eq!(tree.root().child_count(), 0);
    }

    #[test]
    fn unclosed_parameter_list_keeps_class() {
        let (tree, diags) = parse("class A { void M( }");
        assert!(!diags.is_empty());
        let classes = tree.root().find_descendants(&[SyntaxKind::ClassDeclaration]);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].first_child(SyntaxKind::Name).unwrap().text(), "A");
    }

    #[test]
    fn invalid_utf8_yields_one_diagnostic_and_empty_tree() {
        let (tree, diags) = parse_bytes("bad.cs", vec![0x63, 0xff, 0xfe]);
        assert_eq!(diags.len(), 1);
        assert_eq!(tree.root().child_count(), 0);
    }

    #[test]
    fn test_method_shapes() {
        let src = r#"
using Xunit;
namespace N.S
{
    public class CalcTests : IClassFixture<Fx>, IDisposable
    {
        private readonly Calc _c = new Calc();
        public CalcTests(Fx fx) { _fx = fx; }
        [Fact(Skip = "slow")]
        public async Task Adds()
        {
            var r = await _c.AddAsync(1, 2);
            Assert.Equal(3, r);
        }
        [Theory, InlineData(1)]
        public void Expr(int x) => Assert.True(x > 0, "positive");
        public void Dispose() { }
    }
}"#;
        let (tree, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let root = tree.root();
        assert_eq!(root.find_descendants(&[SyntaxKind::MethodDeclaration]).len(), 3);
        assert_eq!(root.find_descendants(&[SyntaxKind::ConstructorDeclaration]).len(), 1);
        assert_eq!(root.find_descendants(&[SyntaxKind::FieldDeclaration]).len(), 1);
        let invocations: Vec<_> = root
            .find_descendants(&[SyntaxKind::InvocationExpression])
            .iter()
            .map(|n| n.text().to_string())
            .collect();
        assert_eq!(
            invocations,
            ["_c.AddAsync(1, 2)", "Assert.Equal(3, r)", "Assert.True(x > 0, \"positive\")"]
        );
        let base = root.find_descendants(&[SyntaxKind::BaseList]);
        let bases: Vec<_> = base[0].children().map(|c| c.text().to_string()).collect();
        assert_eq!(bases, ["IClassFixture<Fx>", "IDisposable"]);
    }

    #[test]
    fn statements_and_control_flow() {
        let src = r#"class T { void M() {
            int a = 1, b;
            List<int> xs = new List<int> { 1, 2 };
            for (int i = 0; i < 10; i++) { xs.Add(i); }
            foreach (var (k, v) in map) { }
            if (a > 0) Foo(); else if (b < 2) Bar(); else { }
            switch (a) { case 1: case int n when n > 5: break; default: return; }
            var s = a switch { 1 => "one", _ => "many" };
            var c = a > 0 ? x : y;
            while (false) { }
            do { a--; } while (a > 0);
            try { } catch (Exception e) when (e != null) { } finally { }
            using (var d = new D()) { }
            using var e2 = new D();
            lock (this) { }
            void Local(int q) { if (q == 0) return; }
        } }"#;
        let (tree, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let root = tree.root();
        let count = |k| root.find_descendants(&[k]).len();
        assert_eq!(count(SyntaxKind::LocalDeclarationStatement), 5);
        assert_eq!(count(SyntaxKind::IfStatement), 3);
        assert_eq!(count(SyntaxKind::ForStatement), 1);
        assert_eq!(count(SyntaxKind::ForEachStatement), 1);
        assert_eq!(count(SyntaxKind::SwitchStatement), 1);
        assert_eq!(count(SyntaxKind::SwitchExpression), 1);
        assert_eq!(count(SyntaxKind::ConditionalExpression), 1);
        assert_eq!(count(SyntaxKind::WhileStatement), 1);
        assert_eq!(count(SyntaxKind::DoStatement), 1);
        assert_eq!(count(SyntaxKind::LocalFunctionStatement), 1);
    }

    #[test]
    fn generics_casts_and_lambdas() {
        let src = r#"class T { void M() {
            var ex = Assert.Throws<ArgumentException>(() => sut.Run(null));
            Assert.IsType<List<int>>(x);
            bool lt = a < b && c > d;
            var n = (int)Math.Round(1.5);
            var p = (a) + b;
            var q = (double)-x;
            Func<int, int> f = y => y * 2;
            items.Where(i => i.Ok).Select((i, idx) => new { i, idx }).ToList();
            var t = (1, "a");
            (var l, var r) = Split();
            int.TryParse(s, out var parsed);
            var g = x?.Name ?? "none";
            var h = arr?[0]!;
            var str = $"{a} and {b("}")}";
            var shifted = a >> 2;
        } }"#;
        let (tree, diags) = parse(src);
        assert!(diags.is_empty(), "{diags:?}");
        let mut s = String::new();
        outline(&tree.root(), 0, &mut s);
        let root = tree.root();
        let generic: Vec<_> = root
            .find_descendants(&[SyntaxKind::GenericName])
            .iter()
            .map(|n| n.text().to_string())
            .collect();
        assert!(generic.contains(&"Throws<ArgumentException>".to_string()), "{s}");
        assert!(generic.contains(&"IsType<List<int>>".to_string()), "{s}");
        assert_eq!(root.find_descendants(&[SyntaxKind::CastExpression]).len(), 2, "{s}");
        assert_eq!(root.find_descendants(&[SyntaxKind::LambdaExpression]).len(), 4, "{s}");
        let binaries = kinds_in(src, SyntaxKind::BinaryExpression);
        assert!(binaries.contains(&"a < b && c > d".to_string()));
        assert!(binaries.contains(&"a >> 2".to_string()));
    }

    #[test]
    fn nested_local_function_if_is_found() {
        let src = "class T { [Fact] void M() { void Inner() { if (x) { } } Inner(); } }";
        assert_eq!(kinds_in(src, SyntaxKind::IfStatement).len(), 1);
    }

    #[test]
    fn missing_brace_recovers_at_next_member() {
        let src = "class T { void A() { Foo(); \n public void B() { Bar(); } }";
        let (tree, diags) = parse(src);
        assert!(!diags.is_empty());
        let methods = tree.root().find_descendants(&[SyntaxKind::MethodDeclaration]);
        assert_eq!(methods.len(), 2);
    }

    #[test]
    fn deep_nesting_does_not_overflow() {
        let src = format!("class T {{ void M() {{ var x = {}1{}; }} }}", "(".repeat(5000), ")".repeat(5000));
        let (_, diags) = parse(&src);
        assert!(!diags.is_empty());
        let src = format!("class T {{ void M() {} }}", "{".repeat(5000));
        parse(&src);
    }

    #[test]
    fn spans_nest_and_siblings_are_ordered() {
        let src = "class A { void M() { Foo(1, Bar(x => x + 1)); if (a) { b(); } } int F = 3; }";
        let (tree, _) = parse(src);
        for n in tree.root().self_and_descendants() {
            let span = n.span();
            assert_eq!(n.text(), &src[span.clone()]);
            let mut prev_end = span.start;
            for c in n.children() {
                let cs = c.span();
                assert!(cs.start >= prev_end && cs.end <= span.end, "{n:?} / {c:?}");
                prev_end = cs.end;
            }
        }
    }
}
