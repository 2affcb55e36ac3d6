//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a strictly decreasing sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with
//! positive integer coefficients; the exponents are ordinals themselves, and
//! the empty sum is zero. Every constructor keeps that shape, so structural
//! equality coincides with ordinal equality.
//!
//! Fundamental sequences follow the Wainer assignment:
//!
//! * `ω^(β+1)[n] = ω^β·n`
//! * `ω^λ[n] = ω^(λ[n])` for limit `λ`
//! * `(α + ω^β·c)[n] = α + ω^β·(c-1) + (ω^β)[n]`
//!
//! Anything that depends on this choice (descent walks, compiled limit
//! notations, lineage pickers) is convention-dependent; other assignments
//! would give other, equally valid, sequences.

mod descent;
mod hydra;
mod syntax;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use descent::{descent_step, descent_walk, DescentError, Picker, UniformPicker};
pub use hydra::{HydraError, HydraTree};
pub use syntax::{parse_ordinal, OrdinalParseError};

/// Nesting limit applied when building `ω^α`.
pub const DEFAULT_DEPTH_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("ordinal nesting depth {depth} exceeds the limit of {limit}")]
    DepthOverflow { depth: usize, limit: usize },
    #[error("coefficient overflow")]
    CoefficientOverflow,
    #[error("{0} is not a limit ordinal")]
    NotALimit(Ordinal),
    #[error("terms are not in Cantor normal form")]
    NotNormalForm,
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    // shared so clones are cheap; every operation builds a fresh list
    terms: Arc<[Term]>,
}

/// One summand `ω^exponent · coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    exponent: Ordinal,
    coefficient: u64,
}

impl Term {
    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> u64 {
        self.coefficient
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn one() -> Self {
        Ordinal::from(1)
    }

    pub fn omega() -> Self {
        Ordinal::single(Ordinal::one(), 1)
    }

    fn new(terms: Vec<Term>) -> Self {
        Ordinal {
            terms: terms.into(),
        }
    }

    /// `ω^exponent · coefficient`; zero when the coefficient is zero.
    fn single(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal::new(vec![Term {
            exponent,
            coefficient,
        }])
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, rejecting
    /// anything that is not already in normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(exponent, coefficient)| Term {
                exponent,
                coefficient,
            })
            .collect();
        let decreasing = terms.windows(2).all(|w| w[0].exponent > w[1].exponent);
        if !decreasing || terms.iter().any(|t| t.coefficient == 0) {
            return Err(OrdinalError::NotNormalForm);
        }
        Ok(Ordinal::new(terms))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_finite(&self) -> Option<u64> {
        match &self.terms[..] {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.classify(), Kind::Limit)
    }

    /// `0` has depth 0; otherwise one more than the deepest exponent.
    /// Naturals have depth 1, `ω` depth 2, `ω^ω` depth 3.
    pub fn nesting_depth(&self) -> usize {
        self.terms
            .iter()
            .map(|t| 1 + t.exponent.nesting_depth())
            .max()
            .unwrap_or(0)
    }

    pub fn classify(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some(last) if last.exponent.is_zero() => {
                let mut pred = self.terms.to_vec();
                let t = pred.last_mut().expect("nonempty");
                if t.coefficient == 1 {
                    pred.pop();
                } else {
                    t.coefficient -= 1;
                }
                Kind::Successor(Ordinal::new(pred))
            }
            Some(_) => Kind::Limit,
        }
    }

    pub fn successor(&self) -> Result<Ordinal, OrdinalError> {
        self.add(&Ordinal::one())
    }

    /// Ordinal addition; absorbs every term of `self` below the leading
    /// exponent of `rhs`.
    pub fn add(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(lead) = rhs.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent > lead.exponent)
            .cloned()
            .collect();
        let mut rest = rhs.terms.iter().cloned();
        let mut first = rest.next().expect("nonempty");
        if let Some(t) = self.terms.get(terms.len()) {
            if t.exponent == first.exponent {
                first.coefficient = first
                    .coefficient
                    .checked_add(t.coefficient)
                    .ok_or(OrdinalError::CoefficientOverflow)?;
            }
        }
        terms.push(first);
        terms.extend(rest);
        Ok(Ordinal::new(terms))
    }

    /// Ordinal multiplication, left-distributive over addition in `rhs`.
    pub fn mul(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(lead) = self.terms.first() else {
            return Ok(Ordinal::zero());
        };
        let mut product = Ordinal::zero();
        for t in rhs.terms.iter() {
            let piece = if t.exponent.is_zero() {
                // self·c only scales the leading coefficient
                let mut terms = self.terms.to_vec();
                terms[0].coefficient = lead
                    .coefficient
                    .checked_mul(t.coefficient)
                    .ok_or(OrdinalError::CoefficientOverflow)?;
                Ordinal::new(terms)
            } else {
                Ordinal::single(lead.exponent.add(&t.exponent)?, t.coefficient)
            };
            product = product.add(&piece)?;
        }
        Ok(product)
    }

    /// `ω^exponent`, subject to [`DEFAULT_DEPTH_LIMIT`].
    pub fn omega_pow(exponent: &Ordinal) -> Result<Ordinal, OrdinalError> {
        Ordinal::omega_pow_with_limit(exponent, DEFAULT_DEPTH_LIMIT)
    }

    pub fn omega_pow_with_limit(exponent: &Ordinal, limit: usize) -> Result<Ordinal, OrdinalError> {
        let depth = exponent.nesting_depth() + 1;
        if depth > limit {
            return Err(OrdinalError::DepthOverflow { depth, limit });
        }
        Ok(Ordinal::single(exponent.clone(), 1))
    }

    /// General exponentiation `self^rhs`.
    pub fn pow(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        // Split rhs = infinite part + m.
        let (infinite, m) = match rhs.terms.last() {
            Some(t) if t.exponent.is_zero() => (
                Ordinal::new(rhs.terms[..rhs.terms.len() - 1].to_vec()),
                t.coefficient,
            ),
            _ => (rhs.clone(), 0),
        };
        let finite_part = self.pow_finite(m)?;
        if infinite.is_zero() {
            return Ok(finite_part);
        }
        match self.as_finite() {
            Some(0) => Ok(Ordinal::zero()),
            Some(1) => Ok(Ordinal::one()),
            Some(_) => {
                // k^(ω·β) = ω^β for 2 ≤ k < ω; here infinite = ω·β.
                let beta = Ordinal::new(
                    infinite
                        .terms
                        .iter()
                        .map(|t| {
                            let exponent = match t.exponent.as_finite() {
                                Some(e) => Ordinal::from(e - 1),
                                None => t.exponent.clone(),
                            };
                            Term {
                                exponent,
                                coefficient: t.coefficient,
                            }
                        })
                        .collect(),
                );
                Ordinal::omega_pow(&beta)?.mul(&finite_part)
            }
            None => {
                // (ω^a·c + …)^(ω·β) = ω^(a·ω·β) for infinite bases.
                let lead = &self.terms[0].exponent;
                Ordinal::omega_pow(&lead.mul(&infinite)?)?.mul(&finite_part)
            }
        }
    }

    fn pow_finite(&self, mut m: u64) -> Result<Ordinal, OrdinalError> {
        let mut result = Ordinal::one();
        // ordinal multiplication is associative, so squaring is valid
        let mut bits = Vec::new();
        while m > 0 {
            bits.push(m & 1);
            m >>= 1;
        }
        for bit in bits.into_iter().rev() {
            result = result.mul(&result)?;
            if bit == 1 {
                result = result.mul(self)?;
            }
        }
        Ok(result)
    }

    /// Hessenberg natural sum: merge terms, adding coefficients of equal
    /// exponents. Commutative, unlike [`Ordinal::add`].
    pub fn natural_sum(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let ord = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some(a), Some(b)) => a.exponent.cmp(&b.exponent),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let mut t = self.terms[i].clone();
                    t.coefficient = t
                        .coefficient
                        .checked_add(rhs.terms[j].coefficient)
                        .ok_or(OrdinalError::CoefficientOverflow)?;
                    terms.push(t);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Ordinal::new(terms))
    }

    /// The `n`-th element `λ[n]` of the fundamental sequence of a limit `λ`.
    pub fn fundamental_sequence(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        let Some(last) = self.terms.last() else {
            return Err(OrdinalError::NotALimit(self.clone()));
        };
        let mut base = self.terms[..self.terms.len() - 1].to_vec();
        if last.coefficient > 1 {
            base.push(Term {
                exponent: last.exponent.clone(),
                coefficient: last.coefficient - 1,
            });
        }
        let tail = match last.exponent.classify() {
            Kind::Zero => return Err(OrdinalError::NotALimit(self.clone())),
            Kind::Successor(beta) => Ordinal::single(beta, n),
            Kind::Limit => Ordinal::single(last.exponent.fundamental_sequence(n)?, 1),
        };
        Ordinal::new(base).add(&tail)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::single(Ordinal::zero(), n)
    }
}

/// Total order on normal forms: lexicographic over terms, comparing
/// exponents recursively, then coefficients; a proper prefix is smaller.
pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    for (x, y) in a.terms.iter().zip(b.terms.iter()) {
        let ord = compare(&x.exponent, &y.exponent).then(x.coefficient.cmp(&y.coefficient));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_ordinal(&text).map_err(serde::de::Error::custom)
    }
}
