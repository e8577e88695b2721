//! Shared pieces of the text formats: positioned parse errors and a small
//! character cursor used by the matrix, word and presentation parsers.

use std::fmt;

use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownGenerator(String),
    MalformedExponent(String),
    MalformedInteger(String),
    BadDenominator(String),
    BadGeneratorName(String),
    DuplicateGenerator(String),
    EmptyGeneratorList,
    MissingGenerators,
    EmptyRelator,
    UnknownDirective(String),
    Unexpected { found: String, expected: String },
    Invalid(String),
}

/// A parse failure pinned to a 1-based line and column of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }

    /// Degenerate-but-well-formed input (an empty relator) is a warning;
    /// it is still rejected.
    pub fn severity(&self) -> Severity {
        match self.kind {
            ParseErrorKind::EmptyRelator => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            UnknownGenerator(g) => write!(f, "unknown generator `{g}`"),
            MalformedExponent(e) => write!(f, "malformed exponent `{e}`"),
            MalformedInteger(e) => write!(f, "malformed integer `{e}`"),
            BadDenominator(d) => write!(f, "denominator {d} does not divide any power of m"),
            BadGeneratorName(g) => write!(f, "invalid generator name `{g}`"),
            DuplicateGenerator(g) => write!(f, "duplicate generator `{g}`"),
            EmptyGeneratorList => write!(f, "empty generator list"),
            MissingGenerators => write!(f, "`gens:` line must come before any relator"),
            EmptyRelator => write!(f, "relator is trivial after free reduction"),
            UnknownDirective(d) => write!(f, "unknown directive `{d}`"),
            Unexpected { found, expected } => write!(f, "expected {expected}, found {found}"),
            Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity() {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{level} at line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

impl std::error::Error for ParseError {}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Character cursor over a single line (or a whole string) that keeps
/// track of the position for error reporting.
pub(crate) struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col_offset: usize,
    _src: std::marker::PhantomData<&'a str>,
}

impl<'a> Cursor<'a> {
    /// `line` and `col_offset` locate `src` inside the original input.
    pub fn new(src: &'a str, line: usize, col_offset: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            col_offset,
            _src: std::marker::PhantomData,
        }
    }

    pub fn column(&self) -> usize {
        self.col_offset + self.pos + 1
    }

    pub fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line, self.column(), kind)
    }

    pub fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line, self.col_offset + pos + 1, kind)
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn describe_here(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        }
    }

    pub fn unexpected(&mut self, expected: &str) -> ParseError {
        let found = self.describe_here();
        self.error(ParseErrorKind::Unexpected {
            found,
            expected: expected.to_string(),
        })
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    pub fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub fn ident(&mut self) -> Option<String> {
        match self.peek() {
            Some(c) if is_ident_start(c) => {}
            _ => return None,
        }
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident_continue(self.chars[self.pos]) {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    /// Raw signed digit run (`-?[0-9]+`); no whitespace is allowed between
    /// the sign and the digits.
    pub fn signed_digits(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        let mut end = self.pos;
        if matches!(self.chars.get(end), Some('-') | Some('+')) {
            end += 1;
        }
        let digits_start = end;
        while end < self.chars.len() && self.chars[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_start {
            return None;
        }
        self.pos = end;
        Some((start, self.chars[start..end].iter().collect()))
    }

    /// Consumes an unsigned token made of characters that could plausibly
    /// belong to a number, for error messages.
    pub fn junk_token(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && !self.chars[self.pos].is_whitespace()
            && !matches!(self.chars[self.pos], '*' | ')' | '(' | ',' | ']' | '=')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    pub fn bigint(&mut self) -> Result<BigInt, ParseError> {
        match self.signed_digits() {
            Some((_, s)) => Ok(s.parse().expect("digit run is a valid integer")),
            None => {
                let pos = self.pos;
                let tok = self.junk_token();
                Err(self.error_at(pos, ParseErrorKind::MalformedInteger(tok)))
            }
        }
    }
}
