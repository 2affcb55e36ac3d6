//! Ordinal notations as programs.
//!
//! A program is a notation when everything it prints is again a notation;
//! its value is the least ordinal above the values of its outputs. This
//! module compiles ordinals to canonical notations, recognizes that image
//! exactly, and checks arbitrary programs against the definition under a
//! fuel budget. Membership is not semi-decidable in general, so the checker
//! can only ever prove, refute, or give up.

mod generators;
mod verify;

use crate::objlang::{parse, serialize, Expr, Program, Statement};
use crate::ordinals::{Kind, Ordinal};

pub use generators::{from_tree_code, limit_generator_text, omega_enumerator, tree_code};
pub use verify::{
    value_lower_bound, verify, ChildReport, FuelSpent, Refutation, ValueBound, Verdict,
    Verification,
};

/// The canonical notation for `a`.
///
/// * `0` is `End`.
/// * `α+1` prints the canonical text of `α` once.
/// * a limit `λ` prints the canonical text of `λ[0]`, `λ[1]`, … forever.
pub fn compile(a: &Ordinal) -> Program {
    let (limit_part, finite) = split_finite(a);
    let mut program = if limit_part.is_zero() {
        Program::end()
    } else if generators::is_omega(&limit_part) {
        omega_enumerator().clone()
    } else {
        limit_generator(&limit_part)
    };
    for _ in 0..finite {
        program = succ_notation(&program);
    }
    program
}

fn limit_generator(lambda: &Ordinal) -> Program {
    let mut statements = vec![
        assign("O", tree_code(lambda)),
        assign("D", limit_generator_text().to_string()),
    ];
    statements.extend_from_slice(generators::limit_generator_body());
    Program::new(statements)
}

fn assign(name: &str, text: String) -> Statement {
    let ident = crate::objlang::Ident::new(name).expect("valid identifier");
    Statement::Assign(ident, Expr::Literal(text))
}

/// Splits `a` into its limit-or-zero part and trailing natural.
fn split_finite(a: &Ordinal) -> (Ordinal, u64) {
    match a.terms().last() {
        Some(t) if t.exponent().is_zero() => {
            let base = Ordinal::from_terms(
                a.terms()[..a.terms().len() - 1]
                    .iter()
                    .map(|t| (t.exponent().clone(), t.coefficient()))
                    .collect(),
            )
            .expect("prefix of a normal form is normal");
            (base, t.coefficient())
        }
        _ => (a.clone(), 0),
    }
}

/// `Print('<canonical text of p>');End`: a notation worth one more than `p`.
pub fn succ_notation(p: &Program) -> Program {
    Program::new(vec![Statement::Print(Expr::Literal(serialize(p)))])
}

/// The ordinal `a` with `compile(a) == p`, or `None` when `p` is outside
/// the compiler's image.
pub fn decompile(p: &Program) -> Option<Ordinal> {
    let mut wraps: u64 = 0;
    let mut unwrapped: Option<Program> = None;
    loop {
        let current = unwrapped.as_ref().unwrap_or(p);
        let [Statement::Print(Expr::Literal(text))] = current.statements.as_slice() else {
            break;
        };
        let inner = parse(text).ok()?;
        if serialize(&inner) != *text {
            return None;
        }
        wraps += 1;
        unwrapped = Some(inner);
    }
    let base = decompile_base(unwrapped.as_ref().unwrap_or(p))?;
    base.add(&Ordinal::from(wraps)).ok()
}

/// Zero or a limit: the empty program, the ω enumerator, or a limit
/// generator carrying a canonical tree code.
fn decompile_base(p: &Program) -> Option<Ordinal> {
    if p.statements.is_empty() {
        return Some(Ordinal::zero());
    }
    if p == omega_enumerator() {
        return Some(Ordinal::omega());
    }
    let body = generators::limit_generator_body();
    let [Statement::Assign(o, Expr::Literal(code)), Statement::Assign(d, Expr::Literal(text)), rest @ ..] =
        p.statements.as_slice()
    else {
        return None;
    };
    if o.as_str() != "O" || d.as_str() != "D" || text != limit_generator_text() || rest != body {
        return None;
    }
    let lambda = from_tree_code(code)?;
    (generators::is_limit(&lambda) && !generators::is_omega(&lambda)).then_some(lambda)
}

/// `λ[n]` as canonical notation text; what the `n`-th output of
/// `compile(λ)` must be.
pub fn expected_output(lambda: &Ordinal, n: u64) -> Option<String> {
    match lambda.classify() {
        Kind::Limit => Some(serialize(&compile(&lambda.fundamental_sequence(n).ok()?))),
        _ => None,
    }
}
