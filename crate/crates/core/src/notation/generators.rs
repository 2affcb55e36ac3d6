//! The object-language programs emitted for limit ordinals.
//!
//! `ω` compiles to the classic enumerator that keeps wrapping its last
//! output in `Print('…');End`. Every other limit `λ` compiles to
//!
//! ```text
//! O='<tree code of λ>';D='<escaped GENERATOR>';GENERATOR
//! ```
//!
//! where `GENERATOR` is one fixed program text. On its `n`-th iteration it
//! reads `O`, computes the tree code of `λ[n]`, splits off the trailing
//! finite part `k`, rebuilds the notation of the limit part (pasting `O`,
//! its own text `D`, and `D` escaped), and wraps the result in `k` layers of
//! `Print('…');End`. The tree code writes `ω^β·c` as `c` copies of
//! `(code(β))`, so `0` is empty, `1` is `()` and `ω` is `(())`.

use std::sync::OnceLock;

use crate::objlang::{escape_literal, parse, serialize, Program};
use crate::ordinals::{Kind, Ordinal};

/// Appends an escaped copy of `src` to `dst`, walking `src` through `scratch`.
fn escape_loop(dst: &str, src: &str, scratch: &str) -> String {
    format!(
        r#"{dst}='';{scratch}={src};
While(Not(Equals({scratch},''))){{
  C=Head({scratch});{scratch}=Tail({scratch});
  If(Equals(C,'\'')){{{dst}={dst}+'\\\'';}}Else{{
    If(Equals(C,'\\')){{{dst}={dst}+'\\\\';}}Else{{
      If(Equals(C,'\n')){{{dst}={dst}+'\\n';}}Else{{{dst}={dst}+C;}}
    }}
  }}
}}
"#
    )
}

fn omega_source() -> String {
    format!(
        r#"X='End';
While(True){{
  Print(X);
  {escape}
  X='Print(\''+Y+'\');End';
}}
End"#,
        escape = escape_loop("Y", "X", "Z")
    )
}

fn generator_source(omega_text: &str) -> String {
    format!(
        r#"{escape_self}
N='';
While(True){{
  X=O;U='';
  While(Not(Equals(X,''))){{
    C=Head(X);X=Tail(X);
    If(Equals(C,'(')){{U='(';}}Else{{U=U+')';}}
  }}
  R=Tail(Tail(Tail(U)));
  X=O;P='';A='';V='';
  While(Not(Equals(X,U))){{
    C=Head(X);X=Tail(X);
    If(Equals(C,'(')){{
      If(Equals(V,R)){{P=P+A;A='(';}}Else{{A=A+C;}}
      V=V+')';
    }}Else{{A=A+C;V=Tail(V);}}
  }}
  Y=Tail(A);
  L=P;K=N;
  While(Not(Equals(K,''))){{L=L+'('+Y+')';K=Tail(K);}}
  L=L+R;
  X=L;B='';Q='';K='';
  While(Not(Equals(X,''))){{
    If(Equals(Head(X),'(')){{
      If(Equals(Head(Tail(X)),')')){{Q=Q+'()';K=K+'1';X=Tail(Tail(X));}}
      Else{{B=B+Q+'(';Q='';K='';X=Tail(X);}}
    }}Else{{B=B+Q+')';Q='';K='';X=Tail(X);}}
  }}
  If(Equals(B,'')){{S='End';}}Else{{
    If(Equals(B,'(())')){{S='{omega}';}}Else{{S='O=\''+B+'\';D=\''+E+'\';'+D;}}
  }}
  While(Not(Equals(K,''))){{
    K=Tail(K);
    {escape_s}
    S='Print(\''+F+'\');End';
  }}
  Print(S);
  N=N+'1';
}}
End"#,
        escape_self = escape_loop("E", "D", "T"),
        escape_s = escape_loop("F", "S", "T"),
        omega = escape_literal(omega_text),
    )
}

struct Generators {
    omega: Program,
    limit: Program,
    limit_text: String,
}

fn generators() -> &'static Generators {
    static CELL: OnceLock<Generators> = OnceLock::new();
    CELL.get_or_init(|| {
        let omega = parse(&omega_source()).expect("omega enumerator parses");
        let omega_text = serialize(&omega);
        // the generator reads O and D, which its callers assign first
        let wrapped = format!("O='';D='';{}", generator_source(&omega_text));
        let mut limit = parse(&wrapped).expect("limit generator parses");
        limit.statements.drain(..2);
        let limit_text = serialize(&limit);
        Generators {
            omega,
            limit,
            limit_text,
        }
    })
}

/// The notation printing `End`, `Print('End');End`, … forever.
pub fn omega_enumerator() -> &'static Program {
    &generators().omega
}

/// Canonical text of the shared limit generator (without the `O`/`D` prelude).
pub fn limit_generator_text() -> &'static str {
    &generators().limit_text
}

pub(crate) fn limit_generator_body() -> &'static [crate::objlang::Statement] {
    &generators().limit.statements
}

/// Tree code of an ordinal: `ω^β·c` becomes `c` copies of `(code(β))`.
pub fn tree_code(a: &Ordinal) -> String {
    let mut out = String::new();
    push_tree_code(&mut out, a);
    out
}

fn push_tree_code(out: &mut String, a: &Ordinal) {
    for t in a.terms() {
        let mut inner = String::new();
        push_tree_code(&mut inner, t.exponent());
        for _ in 0..t.coefficient() {
            out.push('(');
            out.push_str(&inner);
            out.push(')');
        }
    }
}

/// Inverse of [`tree_code`]; `None` unless `code` is balanced and its
/// top-level terms are non-increasing (the only form `tree_code` emits).
pub fn from_tree_code(code: &str) -> Option<Ordinal> {
    let bytes = code.as_bytes();
    let mut pos = 0;
    let a = read_sum(bytes, &mut pos)?;
    (pos == bytes.len()).then_some(a)
}

fn read_sum(bytes: &[u8], pos: &mut usize) -> Option<Ordinal> {
    let mut terms: Vec<(Ordinal, u64)> = Vec::new();
    while bytes.get(*pos) == Some(&b'(') {
        *pos += 1;
        let exponent = read_sum(bytes, pos)?;
        if bytes.get(*pos) != Some(&b')') {
            return None;
        }
        *pos += 1;
        match terms.last_mut() {
            Some((e, c)) if *e == exponent => *c += 1,
            Some((e, _)) if *e < exponent => return None,
            _ => terms.push((exponent, 1)),
        }
    }
    Ordinal::from_terms(terms).ok()
}

pub(crate) fn is_omega(a: &Ordinal) -> bool {
    *a == Ordinal::omega()
}

pub(crate) fn is_limit(a: &Ordinal) -> bool {
    matches!(a.classify(), Kind::Limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objlang::{evaluate, Fuel, Status};
    use crate::ordinals::parse_ordinal;

    #[test]
    fn tree_codes() {
        let cases = [
            ("0", ""),
            ("1", "()"),
            ("3", "()()()"),
            ("w", "(())"),
            ("w*2+1", "(())(())()"),
            ("w^2", "(()())"),
            ("w^w", "((()))"),
        ];
        for (ord, code) in cases {
            let a = parse_ordinal(ord).unwrap();
            assert_eq!(tree_code(&a), code, "{ord}");
            assert_eq!(from_tree_code(code), Some(a), "{ord}");
        }
    }

    #[test]
    fn non_canonical_tree_codes_are_rejected() {
        assert_eq!(from_tree_code("()(())"), None); // increasing
        assert_eq!(from_tree_code("(()"), None);
        assert_eq!(from_tree_code("())"), None);
        assert_eq!(from_tree_code("x"), None);
    }

    #[test]
    fn generator_texts_are_canonical() {
        let text = limit_generator_text();
        assert!(text.ends_with("End"));
        assert!(!text.contains(char::is_whitespace));
        let omega = serialize(omega_enumerator());
        assert_eq!(serialize(&parse(&omega).unwrap()), omega);
    }

    #[test]
    fn omega_enumerator_prints_finite_notations() {
        let t = evaluate(omega_enumerator(), Fuel::new(10_000, 3).unwrap()).unwrap();
        assert_eq!(
            t.outputs,
            [
                "End",
                "Print('End');End",
                "Print('Print(\\'End\\');End');End"
            ]
        );
        assert_eq!(t.status, Status::FuelExhausted);
    }
}
