//! Textual formula language.
//!
//! ```text
//! formula       := implies
//! implies       := or ("->" implies)?
//! or            := and ("|" and)*
//! and           := unary ("&" unary)*
//! unary         := "!" unary | ("G" | "F") interval? unary | atom_or_until
//! atom_or_until := primary ("U" interval? primary)?
//! primary       := "(" formula ")" | "true" | "false" | comparison
//! comparison    := expr ("<" | "<=" | ">" | ">=" | "==" | "!=") expr ("~" number)?
//! expr          := term (("+" | "-") term)*
//! term          := factor ("*" factor)*
//! factor        := "-" factor | "abs" "(" expr ")" | number | channel | "(" expr ")"
//! channel       := ident | ident "(" ident ")"
//! interval      := "[" number "," (number | "inf") "]"
//! ```
//!
//! An omitted interval means `[0,inf]`. `d1(x)` names the derived channel
//! `d1(x)`. The optional `~ tol` suffix sets the tolerance of an `==` or `!=`
//! comparison (default `1e-9`). A `-` directly followed by a number literal
//! is a negative constant.

mod grammar;
mod lexer;
mod print;

use std::fmt;

use thiserror::Error;

pub use grammar::parse_formula;
pub use print::{print_expr, print_formula};

/// Byte range `[start, end)` into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(message: impl Into<String>, span: SourceSpan, expected: Vec<String>) -> Self {
        Self {
            message: message.into(),
            span,
            expected,
        }
    }

    /// The input line with a caret marker under the error span.
    pub fn render(&self, src: &str) -> String {
        let width = (self.span.end - self.span.start).max(1);
        format!(
            "{self}\n  {src}\n  {}{}",
            " ".repeat(src[..self.span.start.min(src.len())].chars().count()),
            "^".repeat(width)
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.span.start)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}
