//! Graph expressions:
//!
//! ```text
//! expr := family ":" int
//!       | "join(" expr "," expr ")"
//!       | "edgelist(" path ")"
//! ```
//!
//! Whitespace between tokens is ignored.

use std::fmt;
use std::path::PathBuf;

use super::{family, join, read_edge_list, FamilyKind, Graph};
use crate::error::{QecError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphExpr {
    Family(FamilyKind, usize),
    Join(Box<GraphExpr>, Box<GraphExpr>),
    EdgeList(PathBuf),
}

impl GraphExpr {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphExpr::Family(kind, n) => family(*kind, *n),
            GraphExpr::Join(a, b) => Ok(join(&a.build()?, &b.build()?)),
            GraphExpr::EdgeList(path) => {
                Ok(read_edge_list(path)?.with_label(format!("edgelist({})", path.display())))
            }
        }
    }

    /// `Some(m)` when the expression is `empty:m`.
    pub fn as_empty(&self) -> Option<usize> {
        match self {
            GraphExpr::Family(FamilyKind::Empty, m) => Some(*m),
            _ => None,
        }
    }
}

impl fmt::Display for GraphExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphExpr::Family(kind, n) => write!(f, "{kind}:{n}"),
            GraphExpr::Join(a, b) => write!(f, "join({a}, {b})"),
            GraphExpr::EdgeList(p) => write!(f, "edgelist({})", p.display()),
        }
    }
}

/// Canonical text of an expression; `parse_expr(&render(e)) == e`.
pub fn render(expr: &GraphExpr) -> String {
    expr.to_string()
}

/// Parses an expression without building the graph.
pub fn parse_expr(text: &str) -> Result<GraphExpr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses and builds the described graph.
pub fn parse_graph_expr(text: &str) -> Result<Graph> {
    parse_expr(text)?.build()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> QecError {
        QecError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        let start = self.pos;
        self.pos += len;
        Ok(&self.src[start..self.pos])
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected an integer"));
        }
        let digits = &self.rest()[..len];
        let v = digits
            .parse()
            .map_err(|_| self.error(format!("integer `{digits}` out of range")))?;
        self.pos += len;
        Ok(v)
    }

    fn expr(&mut self) -> Result<GraphExpr> {
        self.skip_ws();
        let start = self.pos;
        let name = self.ident()?.to_string();
        match name.as_str() {
            "join" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                Ok(GraphExpr::Join(Box::new(a), Box::new(b)))
            }
            "edgelist" => {
                self.expect('(')?;
                self.skip_ws();
                let close = self
                    .rest()
                    .find(')')
                    .ok_or_else(|| self.error("unterminated edgelist("))?;
                let path = self.rest()[..close].trim();
                if path.is_empty() {
                    return Err(self.error("empty edge-list path"));
                }
                let path = PathBuf::from(path);
                self.pos += close + 1;
                Ok(GraphExpr::EdgeList(path))
            }
            _ => {
                let kind: FamilyKind = name.parse().map_err(|e| match e {
                    QecError::UnknownFamily(_) if !self.rest().trim_start().starts_with(':') => {
                        QecError::Syntax {
                            offset: start,
                            message: format!("expected `family:n`, `join(` or `edgelist(`, found `{name}`"),
                        }
                    }
                    other => other,
                })?;
                self.expect(':')?;
                let n = self.int()?;
                Ok(GraphExpr::Family(kind, n))
            }
        }
    }
}
