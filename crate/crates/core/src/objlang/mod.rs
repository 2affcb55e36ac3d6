//! The object language: a tiny deterministic string language whose programs
//! print other programs.
//!
//! A program is a list of statements terminated by `End`. Values are strings;
//! the only operations are concatenation, `Head`/`Tail` and string equality.
//! Every execution is bounded by [`Fuel`], so evaluation is total.
//!
//! ```text
//! program := stmt* "End"
//! stmt    := "Print(" expr ");" | ident "=" expr ";"
//!          | "While(" cond "){" stmt* "}" | "If(" cond "){" stmt* "}Else{" stmt* "}"
//! expr    := "'" chars "'" | ident | expr "+" expr | "Head(" expr ")" | "Tail(" expr ")"
//!          | "(" expr ")"
//! cond    := "True" | "Equals(" expr "," expr ")" | "Not(" cond ")"
//! ```

mod eval;
mod parse;
mod print;

use std::fmt;

pub use eval::{
    evaluate, steps_executed, Fuel, FuelError, RuntimeError, Status, Trace, MAX_STRING_BYTES,
};
pub use parse::{parse, ParseError};
pub use print::{escape_literal, serialize};

/// Words that can never be used as variable names.
pub const KEYWORDS: &[&str] = &[
    "End", "Print", "While", "If", "Else", "True", "Equals", "Not", "Head", "Tail",
];

/// A variable name: a nonempty ASCII identifier that is not a keyword.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(String);

impl Ident {
    pub fn new(name: impl Into<String>) -> Option<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Some(Ident(name))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Print(Expr),
    Assign(Ident, Expr),
    While(Cond, Vec<Statement>),
    IfElse(Cond, Vec<Statement>, Vec<Statement>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Literal(String),
    Var(Ident),
    Concat(Box<Expr>, Box<Expr>),
    Head(Box<Expr>),
    Tail(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    True,
    Equals(Expr, Expr),
    Not(Box<Cond>),
}

impl Program {
    pub fn new(statements: Vec<Statement>) -> Self {
        Program { statements }
    }

    /// The program that stops immediately without output.
    pub fn end() -> Self {
        Program::default()
    }

    /// Returns the first variable that may be read before it is assigned,
    /// or `None` when the program is closed.
    pub fn unbound_variable(&self) -> Option<&Ident> {
        let mut assigned = Vec::new();
        first_unbound_in_block(&self.statements, &mut assigned)
    }

    pub fn is_closed(&self) -> bool {
        self.unbound_variable().is_none()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

impl Expr {
    pub fn lit(text: impl Into<String>) -> Self {
        Expr::Literal(text.into())
    }

    pub fn concat(left: Expr, right: Expr) -> Self {
        Expr::Concat(Box::new(left), Box::new(right))
    }
}

// Definite-assignment analysis: a loop body may run zero times and only the
// intersection of both branches survives an If.
fn first_unbound_in_block<'a>(
    block: &'a [Statement],
    assigned: &mut Vec<&'a Ident>,
) -> Option<&'a Ident> {
    for stmt in block {
        match stmt {
            Statement::Print(e) => {
                if let Some(v) = first_unbound_in_expr(e, assigned) {
                    return Some(v);
                }
            }
            Statement::Assign(name, e) => {
                if let Some(v) = first_unbound_in_expr(e, assigned) {
                    return Some(v);
                }
                if !assigned.contains(&name) {
                    assigned.push(name);
                }
            }
            Statement::While(c, body) => {
                if let Some(v) = first_unbound_in_cond(c, assigned) {
                    return Some(v);
                }
                let mut inner = assigned.clone();
                if let Some(v) = first_unbound_in_block(body, &mut inner) {
                    return Some(v);
                }
            }
            Statement::IfElse(c, then_body, else_body) => {
                if let Some(v) = first_unbound_in_cond(c, assigned) {
                    return Some(v);
                }
                let mut left = assigned.clone();
                if let Some(v) = first_unbound_in_block(then_body, &mut left) {
                    return Some(v);
                }
                let mut right = assigned.clone();
                if let Some(v) = first_unbound_in_block(else_body, &mut right) {
                    return Some(v);
                }
                for name in left {
                    if right.contains(&name) && !assigned.contains(&name) {
                        assigned.push(name);
                    }
                }
            }
        }
    }
    None
}

fn first_unbound_in_expr<'a>(e: &'a Expr, assigned: &[&'a Ident]) -> Option<&'a Ident> {
    match e {
        Expr::Literal(_) => None,
        Expr::Var(name) => (!assigned.contains(&name)).then_some(name),
        Expr::Concat(l, r) => {
            first_unbound_in_expr(l, assigned).or_else(|| first_unbound_in_expr(r, assigned))
        }
        Expr::Head(inner) | Expr::Tail(inner) => first_unbound_in_expr(inner, assigned),
    }
}

fn first_unbound_in_cond<'a>(c: &'a Cond, assigned: &[&'a Ident]) -> Option<&'a Ident> {
    match c {
        Cond::True => None,
        Cond::Equals(l, r) => {
            first_unbound_in_expr(l, assigned).or_else(|| first_unbound_in_expr(r, assigned))
        }
        Cond::Not(inner) => first_unbound_in_cond(inner, assigned),
    }
}
