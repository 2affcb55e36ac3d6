use serde::Serialize;
use thiserror::Error;

use super::{is_identifier, Cond, Expr, Ident, Program, Statement};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum ParseError {
    #[error("byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("byte {offset}: variable `{name}` may be read before it is assigned")]
    Unbound { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Unbound { offset, .. } => *offset,
        }
    }
}

/// Parses object-language source. Whitespace between tokens is ignored.
/// Programs that may read a variable before assigning it are rejected.
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let mut parser = Parser { src: source, pos: 0 };
    let mut assigned = Vec::new();
    let statements = parser.block(&mut assigned, true)?;
    parser.skip_ws();
    if parser.pos != source.len() {
        return Err(parser.expected("end of input after `End`"));
    }
    Ok(Program { statements })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expected(&self, what: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            expected: what.to_string(),
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.expected(&format!("`{token}`")))
        }
    }

    /// Reads an identifier-shaped word (keywords included) without consuming it.
    fn peek_word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, c)| {
                !(c.is_ascii_alphabetic() || c == '_' || (i > 0 && c.is_ascii_digit()))
            })
            .map_or(rest.len(), |(i, _)| i);
        &rest[..len]
    }

    /// Parses statements up to `End` (top level) or `}` (nested block).
    fn block(
        &mut self,
        assigned: &mut Vec<String>,
        top_level: bool,
    ) -> Result<Vec<Statement>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if top_level {
                if self.peek_word() == "End" {
                    self.pos += 3;
                    return Ok(out);
                }
                if self.rest().is_empty() {
                    return Err(self.expected("statement or `End`"));
                }
            } else if self.rest().starts_with('}') {
                return Ok(out);
            } else if self.rest().is_empty() {
                return Err(self.expected("statement or `}`"));
            }
            out.push(self.statement(assigned)?);
        }
    }

    fn statement(&mut self, assigned: &mut Vec<String>) -> Result<Statement, ParseError> {
        let word = self.peek_word();
        match word {
            "Print" => {
                self.pos += word.len();
                self.expect("(")?;
                let e = self.expr(assigned)?;
                self.expect(")")?;
                self.expect(";")?;
                Ok(Statement::Print(e))
            }
            "While" => {
                self.pos += word.len();
                self.expect("(")?;
                let c = self.cond(assigned)?;
                self.expect(")")?;
                self.expect("{")?;
                let mut inner = assigned.clone();
                let body = self.block(&mut inner, false)?;
                self.expect("}")?;
                Ok(Statement::While(c, body))
            }
            "If" => {
                self.pos += word.len();
                self.expect("(")?;
                let c = self.cond(assigned)?;
                self.expect(")")?;
                self.expect("{")?;
                let mut left = assigned.clone();
                let then_body = self.block(&mut left, false)?;
                self.expect("}")?;
                self.expect("Else")?;
                self.expect("{")?;
                let mut right = assigned.clone();
                let else_body = self.block(&mut right, false)?;
                self.expect("}")?;
                for name in left {
                    if right.contains(&name) && !assigned.contains(&name) {
                        assigned.push(name);
                    }
                }
                Ok(Statement::IfElse(c, then_body, else_body))
            }
            w if is_identifier(w) => {
                self.pos += w.len();
                self.expect("=")?;
                let e = self.expr(assigned)?;
                self.expect(";")?;
                if !assigned.iter().any(|a| a == w) {
                    assigned.push(w.to_string());
                }
                Ok(Statement::Assign(Ident(w.to_string()), e))
            }
            _ => Err(self.expected("statement")),
        }
    }

    fn expr(&mut self, assigned: &[String]) -> Result<Expr, ParseError> {
        let mut left = self.operand(assigned)?;
        while self.eat("+") {
            let right = self.operand(assigned)?;
            left = Expr::concat(left, right);
        }
        Ok(left)
    }

    fn operand(&mut self, assigned: &[String]) -> Result<Expr, ParseError> {
        self.skip_ws();
        if self.rest().starts_with('\'') {
            return self.literal().map(Expr::Literal);
        }
        if self.eat("(") {
            let e = self.expr(assigned)?;
            self.expect(")")?;
            return Ok(e);
        }
        let start = self.pos;
        let word = self.peek_word();
        match word {
            "Head" | "Tail" => {
                self.pos += word.len();
                self.expect("(")?;
                let inner = Box::new(self.expr(assigned)?);
                self.expect(")")?;
                Ok(if word == "Head" {
                    Expr::Head(inner)
                } else {
                    Expr::Tail(inner)
                })
            }
            w if is_identifier(w) => {
                if !assigned.iter().any(|a| a == w) {
                    return Err(ParseError::Unbound {
                        offset: start,
                        name: w.to_string(),
                    });
                }
                self.pos += w.len();
                Ok(Expr::Var(Ident(w.to_string())))
            }
            _ => Err(self.expected("expression")),
        }
    }

    fn literal(&mut self) -> Result<String, ParseError> {
        // Caller guarantees the opening quote.
        self.pos += 1;
        let mut text = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\'' => {
                    self.pos += i + 1;
                    return Ok(text);
                }
                '\\' => match chars.next() {
                    Some((_, '\'')) => text.push('\''),
                    Some((_, '\\')) => text.push('\\'),
                    Some((_, 'n')) => text.push('\n'),
                    _ => {
                        self.pos += i;
                        return Err(self.expected("escape sequence \\' \\\\ or \\n"));
                    }
                },
                c => text.push(c),
            }
        }
        self.pos = self.src.len();
        Err(self.expected("closing `'`"))
    }

    fn cond(&mut self, assigned: &[String]) -> Result<Cond, ParseError> {
        let word = self.peek_word();
        match word {
            "True" => {
                self.pos += word.len();
                Ok(Cond::True)
            }
            "Equals" => {
                self.pos += word.len();
                self.expect("(")?;
                let l = self.expr(assigned)?;
                self.expect(",")?;
                let r = self.expr(assigned)?;
                self.expect(")")?;
                Ok(Cond::Equals(l, r))
            }
            "Not" => {
                self.pos += word.len();
                self.expect("(")?;
                let inner = self.cond(assigned)?;
                self.expect(")")?;
                Ok(Cond::Not(Box::new(inner)))
            }
            _ => Err(self.expected("condition `True`, `Equals(..)` or `Not(..)`")),
        }
    }
}
