//! Surface syntax: `0`, naturals, `w`, `+`, `*`, `^` and parentheses,
//! e.g. `w^(w+1)*3+w*2+5`. `^` binds tightest and associates to the right.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Ordinal, OrdinalError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalParseError {
    #[error("position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error(transparent)]
    Arithmetic(#[from] OrdinalError),
}

/// Parses surface syntax and normalizes it to Cantor normal form.
pub fn parse_ordinal(text: &str) -> Result<Ordinal, OrdinalParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let value = p.sum()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.expected("operator or end of input"));
    }
    Ok(value)
}

impl FromStr for Ordinal {
    type Err = OrdinalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expected(&self, what: &str) -> OrdinalParseError {
        OrdinalParseError::Syntax {
            position: self.pos,
            expected: what.to_string(),
        }
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalParseError> {
        let mut acc = self.product()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = acc.add(&self.product()?)?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Ordinal, OrdinalParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Ordinal, OrdinalParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = self.power()?;
            return Ok(base.pow(&exponent)?);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalParseError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.expected("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
                let n: u64 = digits.parse().map_err(|_| OrdinalParseError::Syntax {
                    position: start,
                    expected: "a natural number that fits in 64 bits".into(),
                })?;
                Ok(Ordinal::from(n))
            }
            _ => Err(self.expected("number, `w` or `(`")),
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write_term(f, t)?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t.exponent.as_finite() {
        Some(0) => return write!(f, "{}", t.coefficient),
        Some(1) => f.write_str("w")?,
        Some(e) => write!(f, "w^{e}")?,
        None => {
            // a single power of ω with coefficient 1 needs no grouping
            // because `^` is right-associative
            let bare = matches!(&t.exponent.terms[..], [only] if only.coefficient == 1);
            if bare {
                write!(f, "w^{}", t.exponent)?;
            } else {
                write!(f, "w^({})", t.exponent)?;
            }
        }
    }
    if t.coefficient > 1 {
        write!(f, "*{}", t.coefficient)?;
    }
    Ok(())
}
