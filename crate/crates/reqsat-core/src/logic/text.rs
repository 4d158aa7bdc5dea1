//! Canonical text form for expressions: `And(...)`, `Or(...)`,
//! `Not(...)` over bare symbol identifiers, e.g.
//! `And(A, Not(B), Not(C), D)`. This is the notation used in reports
//! and on the service wire.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Atom, BoolExpr};

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.position, self.message)
    }
}

impl core::error::Error for ExprParseError {}

/// Parse the canonical notation. Bare identifiers become symbol atoms;
/// `And`/`Or` take two or more comma-separated arguments (a single
/// argument collapses to the argument itself), `Not` exactly one.
pub fn parse_expr(input: &str) -> Result<BoolExpr, ExprParseError> {
    let mut p = ExprParser { input, pos: 0 };
    let expr = p.expr(0)?;
    p.skip_ws();
    if p.pos < p.input.len() {
        return Err(p.error("trailing input after expression"));
    }
    Ok(expr)
}

/// Render with a caller-chosen atom labelling (display letters for
/// reports, the bare symbol name on the service wire).
pub fn render_expr<F: Fn(&Atom) -> String>(expr: &BoolExpr, label: &F) -> String {
    match expr {
        BoolExpr::Const(true) => "TRUE".to_string(),
        BoolExpr::Const(false) => "FALSE".to_string(),
        BoolExpr::Var(atom) => label(atom),
        BoolExpr::Not(inner) => format!("Not({})", render_expr(inner, label)),
        BoolExpr::And(children) => format!("And({})", render_args(children, label)),
        BoolExpr::Or(children) => format!("Or({})", render_args(children, label)),
    }
}

fn render_args<F: Fn(&Atom) -> String>(children: &[BoolExpr], label: &F) -> String {
    let parts: Vec<String> = children.iter().map(|c| render_expr(c, label)).collect();
    parts.join(", ")
}

struct ExprParser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn error(&self, message: impl Into<String>) -> ExprParseError {
        ExprParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn eat(&mut self, expected: char) -> Result<(), ExprParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == expected => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{expected}', found '{c}'"))),
            None => Err(self.error(format!("expected '{expected}', found end of input"))),
        }
    }

    fn ident(&mut self) -> Result<String, ExprParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if self.pos == start {
            match self.peek() {
                Some(c) => Err(self.error(format!("expected identifier, found '{c}'"))),
                None => Err(self.error("expected identifier, found end of input")),
            }
        } else {
            Ok(self.input[start..self.pos].to_string())
        }
    }

    fn expr(&mut self, depth: usize) -> Result<BoolExpr, ExprParseError> {
        if depth > MAX_DEPTH {
            return Err(self.error("expression nesting too deep"));
        }
        let name = self.ident()?;
        self.skip_ws();
        let is_call = self.peek() == Some('(');
        match (name.as_str(), is_call) {
            ("And", true) => Ok(BoolExpr::and(self.args(depth)?)),
            ("Or", true) => Ok(BoolExpr::or(self.args(depth)?)),
            ("Not", true) => {
                self.eat('(')?;
                let inner = self.expr(depth + 1)?;
                self.eat(')')?;
                Ok(BoolExpr::not(inner))
            }
            ("And" | "Or" | "Not", false) => {
                Err(self.error(format!("operator '{name}' must be followed by '('")))
            }
            (_, _) => Ok(BoolExpr::var(Atom::symbol(name))),
        }
    }

    fn args(&mut self, depth: usize) -> Result<Vec<BoolExpr>, ExprParseError> {
        self.eat('(')?;
        let mut out = Vec::new();
        out.push(self.expr(depth + 1)?);
        loop {
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                    out.push(self.expr(depth + 1)?);
                }
                Some(')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some(c) => return Err(self.error(format!("expected ',' or ')', found '{c}'"))),
                None => return Err(self.error("unclosed argument list")),
            }
        }
    }
}
