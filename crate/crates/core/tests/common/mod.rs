#![allow(dead_code)]

use ion_core::objlang::{Cond, Expr, Ident, Program, Statement};
use ion_core::ordinals::Ordinal;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random normal form of nesting depth at most `depth`: up to three terms
/// per level, coefficients in `1..=max_coef`.
pub fn random_ordinal(rng: &mut impl Rng, depth: usize, max_coef: u64) -> Ordinal {
    if depth == 0 {
        return Ordinal::zero();
    }
    let mut terms: Vec<(Ordinal, u64)> = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let e = random_ordinal(rng, depth - 1, max_coef);
        if terms.iter().all(|(x, _)| *x != e) {
            terms.push((e, rng.gen_range(1..=max_coef)));
        }
    }
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    Ordinal::from_terms(terms).expect("sorted distinct exponents")
}

/// `count` seeded random ordinals.
pub fn ordinal_corpus(seed: u64, count: usize, depth: usize, max_coef: u64) -> Vec<Ordinal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_ordinal(&mut rng, depth, max_coef))
        .collect()
}

pub fn ordinal(depth: usize) -> impl Strategy<Value = Ordinal> {
    any::<u64>().prop_map(move |seed| {
        random_ordinal(&mut ChaCha8Rng::seed_from_u64(seed), depth, 5)
    })
}

pub fn limit_ordinal(depth: usize) -> impl Strategy<Value = Ordinal> {
    ordinal(depth).prop_filter("limit", |a| a.is_limit())
}

const VARS: [&str; 3] = ["A", "B", "C"];

fn var() -> impl Strategy<Value = Ident> {
    prop::sample::select(&VARS[..]).prop_map(|v| Ident::new(v).unwrap())
}

fn literal() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['a', 'b', '\'', '\\', '\n', '(', ')', ' ']), 0..5)
        .prop_map(|cs| cs.into_iter().collect())
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![literal().prop_map(Expr::Literal), var().prop_map(Expr::Var)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::concat(a, b)),
            inner.clone().prop_map(|e| Expr::Head(Box::new(e))),
            inner.prop_map(|e| Expr::Tail(Box::new(e))),
        ]
    })
}

fn cond() -> impl Strategy<Value = Cond> {
    let leaf = prop_oneof![
        Just(Cond::True),
        (expr(), expr()).prop_map(|(a, b)| Cond::Equals(a, b)),
    ];
    leaf.prop_recursive(2, 4, 1, |inner| inner.prop_map(|c| Cond::Not(Box::new(c))))
}

fn statement() -> impl Strategy<Value = Statement> {
    let leaf = prop_oneof![
        expr().prop_map(Statement::Print),
        (var(), expr()).prop_map(|(v, e)| Statement::Assign(v, e)),
    ];
    leaf.prop_recursive(2, 12, 3, |inner| {
        let block = prop::collection::vec(inner, 0..3);
        prop_oneof![
            (cond(), block.clone()).prop_map(|(c, b)| Statement::While(c, b)),
            (cond(), block.clone(), block).prop_map(|(c, t, e)| Statement::IfElse(c, t, e)),
        ]
    })
}

/// Closed random programs: every variable is assigned up front.
pub fn program() -> impl Strategy<Value = Program> {
    (
        prop::collection::vec(literal(), 3),
        prop::collection::vec(statement(), 0..6),
    )
        .prop_map(|(inits, body)| {
            let mut statements: Vec<Statement> = VARS
                .iter()
                .zip(inits)
                .map(|(v, s)| Statement::Assign(Ident::new(*v).unwrap(), Expr::Literal(s)))
                .collect();
            statements.extend(body);
            Program::new(statements)
        })
}
