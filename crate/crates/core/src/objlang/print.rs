use super::{Cond, Expr, Program, Statement};

/// Canonical source text of a program: no whitespace, single-quoted
/// literals, trailing `End`.
pub fn serialize(p: &Program) -> String {
    let mut out = String::new();
    write_block(&mut out, &p.statements);
    out.push_str("End");
    out
}

/// Escapes `'`, `\` and newline so that `'` + result + `'` is a literal
/// denoting `text`.
pub fn escape_literal(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + text.len() / 4);
    push_escaped(&mut out, text);
    out
}

fn push_escaped(out: &mut String, text: &str) {
    for c in text.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
}

fn write_block(out: &mut String, block: &[Statement]) {
    for stmt in block {
        write_statement(out, stmt);
    }
}

fn write_statement(out: &mut String, stmt: &Statement) {
    match stmt {
        Statement::Print(e) => {
            out.push_str("Print(");
            write_expr(out, e);
            out.push_str(");");
        }
        Statement::Assign(name, e) => {
            out.push_str(name.as_str());
            out.push('=');
            write_expr(out, e);
            out.push(';');
        }
        Statement::While(c, body) => {
            out.push_str("While(");
            write_cond(out, c);
            out.push_str("){");
            write_block(out, body);
            out.push('}');
        }
        Statement::IfElse(c, then_body, else_body) => {
            out.push_str("If(");
            write_cond(out, c);
            out.push_str("){");
            write_block(out, then_body);
            out.push_str("}Else{");
            write_block(out, else_body);
            out.push('}');
        }
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Literal(text) => {
            out.push('\'');
            push_escaped(out, text);
            out.push('\'');
        }
        Expr::Var(name) => out.push_str(name.as_str()),
        Expr::Concat(l, r) => {
            // `+` parses left-associatively, so only a nested right operand
            // needs grouping.
            write_expr(out, l);
            out.push('+');
            if matches!(**r, Expr::Concat(..)) {
                out.push('(');
                write_expr(out, r);
                out.push(')');
            } else {
                write_expr(out, r);
            }
        }
        Expr::Head(inner) => {
            out.push_str("Head(");
            write_expr(out, inner);
            out.push(')');
        }
        Expr::Tail(inner) => {
            out.push_str("Tail(");
            write_expr(out, inner);
            out.push(')');
        }
    }
}

fn write_cond(out: &mut String, c: &Cond) {
    match c {
        Cond::True => out.push_str("True"),
        Cond::Equals(l, r) => {
            out.push_str("Equals(");
            write_expr(out, l);
            out.push(',');
            write_expr(out, r);
            out.push(')');
        }
        Cond::Not(inner) => {
            out.push_str("Not(");
            write_cond(out, inner);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objlang::Ident;

    #[test]
    fn empty_program_is_end() {
        assert_eq!(serialize(&Program::end()), "End");
    }

    #[test]
    fn print_literal() {
        let p = Program::new(vec![Statement::Print(Expr::lit("End"))]);
        assert_eq!(serialize(&p), "Print('End');End");
    }

    #[test]
    fn escapes_quotes_and_backslashes() {
        assert_eq!(escape_literal("a'b\\c\nd"), "a\\'b\\\\c\\nd");
    }

    #[test]
    fn right_nested_concat_is_grouped() {
        let x = || Expr::Var(Ident::new("X").unwrap());
        let e = Expr::concat(x(), Expr::concat(x(), x()));
        let p = Program::new(vec![Statement::Print(e)]);
        assert_eq!(serialize(&p), "Print(X+(X+X));End");
    }
}
