use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Source region. Lines are 1-based, columns 0-based (in characters),
/// byte offsets index the original UTF-8 text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: Span) -> Span {
        let first = if self.start <= other.start { self } else { other };
        let last = if self.end >= other.end { self } else { other };
        Span {
            start: first.start,
            line: first.line,
            col: first.col,
            end: last.end,
            end_line: last.end_line,
            end_col: last.end_col,
        }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn is_synthetic(&self) -> bool {
        self.line == 0
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Name,
    Number,
    String,
    Operator,
    Keyword,
    Newline,
    Indent,
    Dedent,
    Comment,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Raw source text. Empty for synthetic tokens (indent, dedent, eof and
    /// the implicit newline at end of input).
    pub lexeme: String,
    pub span: Span,
    /// Decoded value for string tokens.
    pub value: Option<String>,
}

impl Token {
    pub fn is_synthetic(&self) -> bool {
        self.lexeme.is_empty()
    }

    pub fn is_op(&self, op: &str) -> bool {
        self.kind == TokenKind::Operator && self.lexeme == op
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.lexeme == kw
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {reason}")]
pub struct LexError {
    pub span: Span,
    pub reason: String,
}

pub const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del",
    "elif", "else", "except", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
    "not", "or", "pass", "raise", "return", "try", "while", "with", "yield",
];

// Longest first so that maximal munch works by linear scan.
const OPERATORS: &[&str] = &[
    "**=", "//=", ">>=", "<<=", "...", "->", "**", "//", "==", "!=", "<=", ">=", "<<", ">>", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "@=", ":=", "+", "-", "*", "/", "%", "@", "&", "|", "^", "~", "<", ">", "(", ")", "[", "]",
    "{", "}", ",", ":", ".", ";", "=",
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
    tokens: Vec<Token>,
    indents: Vec<u32>,
    depth: usize,
    at_line_start: bool,
    line_has_tokens: bool,
}

/// Split `source` into tokens. The result always ends with an `Eof` token.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut lx = Lexer {
        src: source,
        pos: 0,
        line: 1,
        col: 0,
        tokens: Vec::new(),
        indents: vec![0],
        depth: 0,
        at_line_start: true,
        line_has_tokens: false,
    };
    lx.run()?;
    Ok(lx.tokens)
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 0;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> Span {
        Span { start: self.pos, end: self.pos, line: self.line, col: self.col, end_line: self.line, end_col: self.col }
    }

    fn finish(&self, start: Span) -> Span {
        Span { end: self.pos, end_line: self.line, end_col: self.col, ..start }
    }

    fn push(&mut self, kind: TokenKind, start: Span, value: Option<String>) {
        let span = self.finish(start);
        let lexeme = self.src[span.start..span.end].to_string();
        self.tokens.push(Token { kind, lexeme, span, value });
    }

    fn synthetic(&mut self, kind: TokenKind) {
        let span = self.here();
        self.tokens.push(Token { kind, lexeme: String::new(), span, value: None });
    }

    fn error<T>(&self, span: Span, reason: impl Into<String>) -> Result<T, LexError> {
        Err(LexError { span, reason: reason.into() })
    }

    fn run(&mut self) -> Result<(), LexError> {
        loop {
            if self.at_line_start && self.depth == 0 {
                self.at_line_start = false;
                if self.handle_indentation()? {
                    continue;
                }
            }
            let Some(c) = self.peek() else { break };
            let start = self.here();
            match c {
                ' ' | '\t' | '\x0c' => {
                    self.bump();
                }
                '\r' | '\n' => {
                    if c == '\r' {
                        self.bump();
                        if self.peek() == Some('\n') {
                            self.bump();
                        }
                    } else {
                        self.bump();
                    }
                    if self.depth == 0 {
                        if self.line_has_tokens {
                            self.push(TokenKind::Newline, start, None);
                        }
                        self.line_has_tokens = false;
                        self.at_line_start = true;
                    }
                }
                '#' => {
                    while let Some(c) = self.peek() {
                        if c == '\n' || c == '\r' {
                            break;
                        }
                        self.bump();
                    }
                    self.push(TokenKind::Comment, start, None);
                }
                '\\' => {
                    self.bump();
                    match self.peek() {
                        Some('\n') => {
                            self.bump();
                        }
                        Some('\r') => {
                            self.bump();
                            if self.peek() == Some('\n') {
                                self.bump();
                            }
                        }
                        _ => return self.error(self.finish(start), "unexpected character after line continuation"),
                    }
                }
                c if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) => {
                    self.number(start);
                }
                c if is_ident_start(c) => {
                    if let Some(quote_at) = self.string_prefix_len() {
                        self.string(start, quote_at)?;
                    } else {
                        while self.peek().is_some_and(is_ident_continue) {
                            self.bump();
                        }
                        let word = &self.src[start.start..self.pos];
                        let kind = if KEYWORDS.contains(&word) { TokenKind::Keyword } else { TokenKind::Name };
                        self.push(kind, start, None);
                        self.line_has_tokens = true;
                    }
                }
                '\'' | '"' => {
                    self.string(start, 0)?;
                }
                _ => {
                    let rest = &self.src[self.pos..];
                    let Some(op) = OPERATORS.iter().find(|op| rest.starts_with(**op)) else {
                        self.bump();
                        return self.error(self.finish(start), format!("illegal character {c:?}"));
                    };
                    for _ in 0..op.len() {
                        self.bump();
                    }
                    match *op {
                        "(" | "[" | "{" => self.depth += 1,
                        ")" | "]" | "}" => self.depth = self.depth.saturating_sub(1),
                        _ => {}
                    }
                    self.push(TokenKind::Operator, start, None);
                    self.line_has_tokens = true;
                }
            }
        }
        if self.line_has_tokens {
            self.synthetic(TokenKind::Newline);
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            self.synthetic(TokenKind::Dedent);
        }
        self.synthetic(TokenKind::Eof);
        Ok(())
    }

    /// Measures indentation at the start of a logical line and emits
    /// indent/dedent tokens. Returns true when the line was blank or
    /// comment-only and has been fully consumed.
    fn handle_indentation(&mut self) -> Result<bool, LexError> {
        let mut width = 0u32;
        while let Some(c) = self.peek() {
            match c {
                ' ' => width += 1,
                '\t' => width = (width / 8 + 1) * 8,
                '\x0c' => width = 0,
                _ => break,
            }
            self.bump();
        }
        match self.peek() {
            None => return Ok(false),
            Some('\n') | Some('\r') => {
                if self.bump() == Some('\r') && self.peek() == Some('\n') {
                    self.bump();
                }
                self.at_line_start = true;
                return Ok(true);
            }
            Some('#') => {
                let start = self.here();
                while let Some(c) = self.peek() {
                    if c == '\n' || c == '\r' {
                        break;
                    }
                    self.bump();
                }
                self.push(TokenKind::Comment, start, None);
                if self.peek().is_some() && self.bump() == Some('\r') && self.peek() == Some('\n') {
                    self.bump();
                }
                self.at_line_start = true;
                return Ok(true);
            }
            _ => {}
        }
        let current = *self.indents.last().expect("indent stack never empty");
        if width > current {
            self.indents.push(width);
            self.synthetic(TokenKind::Indent);
        } else {
            while width < *self.indents.last().expect("indent stack never empty") {
                self.indents.pop();
                self.synthetic(TokenKind::Dedent);
            }
            if width != *self.indents.last().expect("indent stack never empty") {
                return self.error(self.here(), "unindent does not match any outer indentation level");
            }
        }
        Ok(false)
    }

    fn number(&mut self, start: Span) {
        let hex_like = self.peek() == Some('0') && matches!(self.peek_at(1), Some('x' | 'X' | 'o' | 'O' | 'b' | 'B'));
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                let exp = !hex_like && (c == 'e' || c == 'E');
                self.bump();
                if exp && matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
            } else {
                break;
            }
        }
        self.push(TokenKind::Number, start, None);
        self.line_has_tokens = true;
    }

    /// If the identifier at the cursor is a string prefix immediately
    /// followed by a quote, returns the prefix length.
    fn string_prefix_len(&self) -> Option<usize> {
        let rest = &self.src[self.pos..];
        let prefix: String = rest.chars().take_while(|c| c.is_ascii_alphabetic()).take(3).collect();
        for len in (1..=prefix.len().min(2)).rev() {
            let p = prefix[..len].to_ascii_lowercase();
            let valid = matches!(p.as_str(), "r" | "b" | "u" | "f" | "rb" | "br" | "fr" | "rf");
            if valid && matches!(rest[len..].chars().next(), Some('\'' | '"')) {
                return Some(len);
            }
        }
        None
    }

    fn string(&mut self, start: Span, prefix_len: usize) -> Result<(), LexError> {
        let prefix = self.src[self.pos..self.pos + prefix_len].to_ascii_lowercase();
        for _ in 0..prefix_len {
            self.bump();
        }
        let raw = prefix.contains('r');
        let quote = self.bump().expect("caller checked quote");
        let triple = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if triple {
            self.bump();
            self.bump();
        }
        let mut value = String::new();
        loop {
            let Some(c) = self.peek() else {
                return self.error(self.finish(start), "unterminated string literal");
            };
            if c == quote {
                if !triple {
                    self.bump();
                    break;
                }
                if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                    self.bump();
                    self.bump();
                    self.bump();
                    break;
                }
                value.push(c);
                self.bump();
                continue;
            }
            if (c == '\n' || c == '\r') && !triple {
                return self.error(self.finish(start), "unterminated string literal");
            }
            if c == '\\' {
                self.bump();
                let Some(next) = self.bump() else {
                    return self.error(self.finish(start), "unterminated string literal");
                };
                if raw {
                    value.push('\\');
                    value.push(next);
                } else {
                    match next {
                        'n' => value.push('\n'),
                        't' => value.push('\t'),
                        'r' => value.push('\r'),
                        '0' => value.push('\0'),
                        '\\' => value.push('\\'),
                        '\'' => value.push('\''),
                        '"' => value.push('"'),
                        '\n' => {}
                        other => {
                            value.push('\\');
                            value.push(other);
                        }
                    }
                }
                continue;
            }
            value.push(c);
            self.bump();
        }
        self.push(TokenKind::String, start, Some(value));
        self.line_has_tokens = true;
        Ok(())
    }
}

pub fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

pub fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

/// True when `s` is a Python identifier that is not a keyword.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue) && !KEYWORDS.contains(&s)
}
