//! Tokenizer for C# source text.
//!
//! Whitespace, comments and preprocessor directive lines are trivia and never
//! become tokens. Every string form (regular, verbatim, interpolated, raw) is a
//! single token, so interpolation holes are opaque to the parser.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Keyword,
    NumericLiteral,
    StringLiteral,
    InterpolatedString,
    CharLiteral,
    Punct,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub span: Range<usize>,
    pub message: String,
}

const KEYWORDS: &[&str] = &[
    "abstract", "as", "base", "bool", "break", "byte", "case", "catch", "char", "checked", "class",
    "const", "continue", "decimal", "default", "delegate", "do", "double", "else", "enum", "event",
    "explicit", "extern", "false", "finally", "fixed", "float", "for", "foreach", "goto", "if",
    "implicit", "in", "int", "interface", "internal", "is", "lock", "long", "namespace", "new",
    "null", "object", "operator", "out", "override", "params", "private", "protected", "public",
    "readonly", "ref", "return", "sbyte", "sealed", "short", "sizeof", "stackalloc", "static",
    "string", "struct", "switch", "this", "throw", "true", "try", "typeof", "uint", "ulong",
    "unchecked", "unsafe", "ushort", "using", "virtual", "void", "volatile", "while",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.binary_search(&word).is_ok()
}

// Longest first. `>>` and `>>=` are deliberately absent: the parser joins
// adjacent `>` tokens so that nested generic argument lists close cleanly.
const PUNCTS: &[&str] = &[
    "<<=", "??=", "=>", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "<<", "->", "::", "??", "?.", "..", "{", "}", "(", ")", "[", "]", ";",
    ",", ".", ":", "?", "+", "-", "*", "/", "%", "&", "|", "^", "!", "~", "=", "<", ">",
];

pub struct Lexed {
    pub tokens: Vec<Token>,
    pub errors: Vec<LexError>,
}

pub fn tokenize(text: &str) -> Lexed {
    let mut lx = Lexer {
        src: text.as_bytes(),
        text,
        pos: 0,
        tokens: Vec::new(),
        errors: Vec::new(),
        line_start: true,
    };
    lx.run();
    Lexed {
        tokens: lx.tokens,
        errors: lx.errors,
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    tokens: Vec<Token>,
    errors: Vec<LexError>,
    // only whitespace seen since the last newline
    line_start: bool,
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

impl<'a> Lexer<'a> {
    fn peek(&self, ahead: usize) -> Option<u8> {
        self.src.get(self.pos + ahead).copied()
    }

    fn peek_char(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn push(&mut self, kind: TokenKind, start: usize) {
        self.tokens.push(Token {
            kind,
            span: start..self.pos,
        });
        self.line_start = false;
    }

    fn error(&mut self, span: Range<usize>, message: impl Into<String>) {
        self.errors.push(LexError {
            span,
            message: message.into(),
        });
    }

    fn run(&mut self) {
        while let Some(c) = self.peek_char() {
            let start = self.pos;
            match c {
                '\n' => {
                    self.pos += 1;
                    self.line_start = true;
                }
                c if c.is_whitespace() => self.pos += c.len_utf8(),
                '/' if self.peek(1) == Some(b'/') => self.skip_line(),
                '/' if self.peek(1) == Some(b'*') => {
                    match self.text[self.pos + 2..].find("*/") {
                        Some(end) => self.pos += 2 + end + 2,
                        None => {
                            self.pos = self.src.len();
                            self.error(start..self.pos, "unterminated block comment");
                        }
                    }
                }
                '#' if self.line_start => self.skip_line(),
                '"' | '$' | '@' if self.try_string() => {}
                '\'' => self.char_literal(),
                '0'..='9' => self.number(),
                '.' if matches!(self.peek(1), Some(b'0'..=b'9')) => self.number(),
                '@' if self.text[self.pos + 1..].chars().next().is_some_and(is_ident_start) => {
                    self.pos += 1;
                    self.ident_tail();
                    self.push(TokenKind::Identifier, start);
                }
                c if is_ident_start(c) => {
                    self.ident_tail();
                    let kind = if is_keyword(&self.text[start..self.pos]) {
                        TokenKind::Keyword
                    } else {
                        TokenKind::Identifier
                    };
                    self.push(kind, start);
                }
                _ => self.punct(c),
            }
        }
    }

    fn skip_line(&mut self) {
        match self.text[self.pos..].find('\n') {
            Some(n) => self.pos += n,
            None => self.pos = self.src.len(),
        }
    }

    fn ident_tail(&mut self) {
        while let Some(c) = self.peek_char() {
            if is_ident_continue(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn punct(&mut self, c: char) {
        let start = self.pos;
        let rest = &self.text[self.pos..];
        for p in PUNCTS {
            if rest.starts_with(p) {
                // `a ? .5 : b` must not lex as `?.`
                if *p == "?." && matches!(self.peek(2), Some(b'0'..=b'9')) {
                    continue;
                }
                self.pos += p.len();
                self.push(TokenKind::Punct, start);
                return;
            }
        }
        self.pos += c.len_utf8();
        self.push(TokenKind::Unknown, start);
        self.error(start..self.pos, format!("unexpected character {c:?}"));
    }

    fn number(&mut self) {
        let start = self.pos;
        let hex_or_bin = self.peek(0) == Some(b'0') && matches!(self.peek(1), Some(b'x' | b'X' | b'b' | b'B'));
        if hex_or_bin {
            self.pos += 2;
            while matches!(self.peek(0), Some(c) if c.is_ascii_hexdigit() || c == b'_') {
                self.pos += 1;
            }
        } else {
            self.digits();
            if self.peek(0) == Some(b'.') && matches!(self.peek(1), Some(b'0'..=b'9')) {
                self.pos += 1;
                self.digits();
            }
            if matches!(self.peek(0), Some(b'e' | b'E')) {
                let sign = usize::from(matches!(self.peek(1), Some(b'+' | b'-')));
                if matches!(self.peek(1 + sign), Some(b'0'..=b'9')) {
                    self.pos += 1 + sign;
                    self.digits();
                }
            }
        }
        while matches!(self.peek(0), Some(b'u' | b'U' | b'l' | b'L' | b'f' | b'F' | b'd' | b'D' | b'm' | b'M')) {
            self.pos += 1;
        }
        self.push(TokenKind::NumericLiteral, start);
    }

    fn digits(&mut self) {
        while matches!(self.peek(0), Some(b'0'..=b'9' | b'_')) {
            self.pos += 1;
        }
    }

    fn char_literal(&mut self) {
        let start = self.pos;
        self.pos += 1;
        loop {
            match self.peek(0) {
                None | Some(b'\n') => {
                    self.error(start..self.pos, "unterminated character literal");
                    break;
                }
                Some(b'\\') => self.pos = (self.pos + 2).min(self.src.len()),
                Some(b'\'') => {
                    self.pos += 1;
                    break;
                }
                Some(_) => self.pos += self.peek_char().map_or(1, char::len_utf8),
            }
        }
        self.push(TokenKind::CharLiteral, start);
    }

    /// Recognizes every string prefix form at the cursor. Returns false when
    /// the cursor is not at a string (e.g. a lone `@` or `$`).
    fn try_string(&mut self) -> bool {
        let start = self.pos;
        let mut i = self.pos;
        let mut dollars = 0;
        let mut verbatim = false;
        loop {
            match self.src.get(i) {
                Some(b'$') => dollars += 1,
                Some(b'@') if !verbatim => verbatim = true,
                _ => break,
            }
            i += 1;
        }
        if self.src.get(i) != Some(&b'"') {
            return false;
        }
        let quotes = self.src[i..].iter().take_while(|&&b| b == b'"').count();
        let kind = if dollars > 0 {
            TokenKind::InterpolatedString
        } else {
            TokenKind::StringLiteral
        };
        self.pos = i;
        if quotes >= 3 && !verbatim {
            self.raw_string(quotes, start);
        } else {
            self.pos += 1;
            let closed = if dollars > 0 {
                self.interpolated_body(verbatim)
            } else {
                self.plain_body(verbatim)
            };
            if !closed {
                self.error(start..self.pos, "unterminated string literal");
            }
        }
        if self.text[self.pos..].starts_with("u8") || self.text[self.pos..].starts_with("U8") {
            self.pos += 2;
        }
        self.push(kind, start);
        true
    }

    fn raw_string(&mut self, quotes: usize, start: usize) {
        self.pos += quotes;
        let closing = "\"".repeat(quotes);
        match self.text[self.pos..].find(&closing) {
            Some(n) => {
                self.pos += n + quotes;
                while self.peek(0) == Some(b'"') {
                    self.pos += 1;
                }
            }
            None => {
                self.pos = self.src.len();
                self.error(start..self.pos, "unterminated raw string literal");
            }
        }
    }

    /// Cursor just past the opening quote. Returns whether the closing quote was found.
    fn plain_body(&mut self, verbatim: bool) -> bool {
        loop {
            match self.peek(0) {
                None => return false,
                Some(b'\n') if !verbatim => return false,
                Some(b'\\') if !verbatim => self.pos = (self.pos + 2).min(self.src.len()),
                Some(b'"') => {
                    if verbatim && self.peek(1) == Some(b'"') {
                        self.pos += 2;
                    } else {
                        self.pos += 1;
                        return true;
                    }
                }
                Some(_) => self.pos += self.peek_char().map_or(1, char::len_utf8),
            }
        }
    }

    fn interpolated_body(&mut self, verbatim: bool) -> bool {
        loop {
            match self.peek(0) {
                None => return false,
                Some(b'\n') if !verbatim => return false,
                Some(b'\\') if !verbatim => self.pos = (self.pos + 2).min(self.src.len()),
                Some(b'"') => {
                    if verbatim && self.peek(1) == Some(b'"') {
                        self.pos += 2;
                    } else {
                        self.pos += 1;
                        return true;
                    }
                }
                Some(b'{') if self.peek(1) == Some(b'{') => self.pos += 2,
                Some(b'{') => {
                    self.pos += 1;
                    if !self.interpolation_hole() {
                        return false;
                    }
                }
                Some(_) => self.pos += self.peek_char().map_or(1, char::len_utf8),
            }
        }
    }

    /// Skips an interpolation hole up to and including its closing `}`.
    fn interpolation_hole(&mut self) -> bool {
        let mut depth = 0usize;
        loop {
            match self.peek(0) {
                None => return false,
                Some(b'{') | Some(b'(') | Some(b'[') => {
                    depth += 1;
                    self.pos += 1;
                }
                Some(b')') | Some(b']') => {
                    depth = depth.saturating_sub(1);
                    self.pos += 1;
                }
                Some(b'}') => {
                    self.pos += 1;
                    if depth == 0 {
                        return true;
                    }
                    depth -= 1;
                }
                Some(b'"') | Some(b'$') | Some(b'@') => {
                    let before = self.tokens.len();
                    let errors = self.errors.len();
                    if self.try_string() {
                        // nested strings are part of the outer token
                        self.tokens.truncate(before);
                        if self.errors.len() > errors {
                            return false;
                        }
                    } else {
                        self.pos += 1;
                    }
                }
                Some(b'\'') => {
                    let before = self.tokens.len();
                    self.char_literal();
                    self.tokens.truncate(before);
                }
                Some(_) => self.pos += self.peek_char().map_or(1, char::len_utf8),
            }
        }
    }
}
