use std::cell::Cell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Cond, Expr, Program, Statement};

/// Execution budget. Both bounds are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fuel {
    max_steps: u64,
    max_outputs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fuel bounds must be positive (got max_steps={max_steps}, max_outputs={max_outputs})")]
pub struct FuelError {
    pub max_steps: u64,
    pub max_outputs: u64,
}

impl Fuel {
    pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
    pub const DEFAULT_MAX_OUTPUTS: u64 = 16;

    pub fn new(max_steps: u64, max_outputs: u64) -> Result<Self, FuelError> {
        if max_steps == 0 || max_outputs == 0 {
            return Err(FuelError {
                max_steps,
                max_outputs,
            });
        }
        Ok(Fuel {
            max_steps,
            max_outputs,
        })
    }

    pub fn max_steps(&self) -> u64 {
        self.max_steps
    }

    pub fn max_outputs(&self) -> u64 {
        self.max_outputs
    }

    /// True when `self` allows at least as much as `other` on both bounds.
    pub fn covers(&self, other: &Fuel) -> bool {
        self.max_steps >= other.max_steps && self.max_outputs >= other.max_outputs
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel {
            max_steps: Self::DEFAULT_MAX_STEPS,
            max_outputs: Self::DEFAULT_MAX_OUTPUTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    /// The program reached its end.
    Halted,
    /// A step or output bound stopped execution.
    FuelExhausted,
}

/// Record of one bounded run: everything printed, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub outputs: Vec<String>,
    pub status: Status,
    pub steps_used: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum RuntimeError {
    #[error("Head of empty string after {steps_used} steps")]
    HeadOfEmpty { steps_used: u64 },
    #[error("Tail of empty string after {steps_used} steps")]
    TailOfEmpty { steps_used: u64 },
    #[error("variable `{name}` read before assignment after {steps_used} steps")]
    Unbound { name: String, steps_used: u64 },
}

impl RuntimeError {
    pub fn steps_used(&self) -> u64 {
        match self {
            RuntimeError::HeadOfEmpty { steps_used }
            | RuntimeError::TailOfEmpty { steps_used }
            | RuntimeError::Unbound { steps_used, .. } => *steps_used,
        }
    }
}

/// Longest string a running program may build. A concatenation that would
/// exceed it stops the run as if fuel had run out.
pub const MAX_STRING_BYTES: usize = 1 << 24;

thread_local! {
    static STEPS_EXECUTED: Cell<u64> = const { Cell::new(0) };
}

/// Total evaluator steps executed on the current thread so far.
pub fn steps_executed() -> u64 {
    STEPS_EXECUTED.with(Cell::get)
}

/// Runs `program` under `fuel`. Each statement execution, and each loop
/// condition test, costs one step. Execution stops with
/// [`Status::FuelExhausted`] when a step is needed beyond `max_steps`, a
/// `Print` would exceed `max_outputs`, or a string would grow past
/// [`MAX_STRING_BYTES`].
pub fn evaluate(program: &Program, fuel: Fuel) -> Result<Trace, RuntimeError> {
    let mut slots = Slots::default();
    let code = lower_block(&program.statements, &mut slots);
    let mut machine = Machine {
        env: vec![None; slots.names.len()],
        names: &slots.names,
        outputs: Vec::new(),
        steps: 0,
        fuel,
    };
    let result = machine.run_block(&code);
    STEPS_EXECUTED.with(|c| c.set(c.get() + machine.steps));
    let status = match result {
        Ok(()) => Status::Halted,
        Err(Stop::Fuel) => Status::FuelExhausted,
        Err(Stop::Error(e)) => return Err(e),
    };
    Ok(Trace {
        outputs: machine.outputs,
        status,
        steps_used: machine.steps,
    })
}

// ---------------------------------------------------------------------------
// Lowered form: variables resolved to slots, concatenation chains flattened,
// and `X = X + ...` turned into an in-place append.

#[derive(Default)]
struct Slots {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Slots {
    fn slot(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }
}

enum Op {
    Print(Val),
    Assign(usize, Val),
    Append(usize, Vec<Val>),
    While(Test, Vec<Op>),
    If(Test, Vec<Op>, Vec<Op>),
}

enum Val {
    Lit(Str),
    Var(usize),
    Concat(Vec<Val>),
    Head(Box<Val>),
    Tail(Box<Val>),
}

enum Test {
    True,
    Equals(Val, Val),
    Not(Box<Test>),
}

fn lower_block(block: &[Statement], slots: &mut Slots) -> Vec<Op> {
    block.iter().map(|s| lower_statement(s, slots)).collect()
}

fn lower_statement(stmt: &Statement, slots: &mut Slots) -> Op {
    match stmt {
        Statement::Print(e) => Op::Print(lower_expr(e, slots)),
        Statement::Assign(name, e) => {
            let target = slots.slot(name.as_str());
            let mut parts = Vec::new();
            flatten_concat(e, &mut parts);
            if parts.len() > 1 && matches!(parts[0], Expr::Var(v) if v == name) {
                let rest = parts[1..].iter().map(|p| lower_expr(p, slots)).collect();
                Op::Append(target, rest)
            } else {
                Op::Assign(target, lower_expr(e, slots))
            }
        }
        Statement::While(c, body) => Op::While(lower_cond(c, slots), lower_block(body, slots)),
        Statement::IfElse(c, t, e) => Op::If(
            lower_cond(c, slots),
            lower_block(t, slots),
            lower_block(e, slots),
        ),
    }
}

fn flatten_concat<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
    match e {
        Expr::Concat(l, r) => {
            flatten_concat(l, out);
            flatten_concat(r, out);
        }
        other => out.push(other),
    }
}

fn lower_expr(e: &Expr, slots: &mut Slots) -> Val {
    match e {
        Expr::Literal(text) => Val::Lit(Str::from(text.as_str())),
        Expr::Var(name) => Val::Var(slots.slot(name.as_str())),
        Expr::Concat(..) => {
            let mut parts = Vec::new();
            flatten_concat(e, &mut parts);
            Val::Concat(parts.into_iter().map(|p| lower_expr(p, slots)).collect())
        }
        Expr::Head(inner) => Val::Head(Box::new(lower_expr(inner, slots))),
        Expr::Tail(inner) => Val::Tail(Box::new(lower_expr(inner, slots))),
    }
}

fn lower_cond(c: &Cond, slots: &mut Slots) -> Test {
    match c {
        Cond::True => Test::True,
        Cond::Equals(l, r) => Test::Equals(lower_expr(l, slots), lower_expr(r, slots)),
        Cond::Not(inner) => Test::Not(Box::new(lower_cond(inner, slots))),
    }
}

// ---------------------------------------------------------------------------

/// A string value: a window into a shared buffer, so `Tail` is O(1) and
/// appending to a uniquely owned value is amortized O(appended length).
#[derive(Clone)]
struct Str {
    buf: Rc<String>,
    start: usize,
    end: usize,
}

impl From<&str> for Str {
    fn from(s: &str) -> Self {
        Str {
            buf: Rc::new(s.to_string()),
            start: 0,
            end: s.len(),
        }
    }
}

impl Str {
    fn as_str(&self) -> &str {
        &self.buf[self.start..self.end]
    }

    fn append(&mut self, parts: &[Str]) -> Result<(), Stop> {
        let extra: usize = parts.iter().map(|p| p.end - p.start).sum();
        if self.end - self.start + extra > MAX_STRING_BYTES {
            return Err(Stop::Fuel);
        }
        let in_place = self.end == self.buf.len() && Rc::get_mut(&mut self.buf).is_some();
        if in_place {
            let buf = Rc::get_mut(&mut self.buf).expect("checked unique");
            for p in parts {
                buf.push_str(p.as_str());
            }
            self.end = buf.len();
        } else {
            let mut s = String::with_capacity((self.end - self.start + extra) * 2);
            s.push_str(self.as_str());
            for p in parts {
                s.push_str(p.as_str());
            }
            self.end = s.len();
            self.start = 0;
            self.buf = Rc::new(s);
        }
        Ok(())
    }
}

enum Stop {
    Fuel,
    Error(RuntimeError),
}

struct Machine<'a> {
    env: Vec<Option<Str>>,
    names: &'a [String],
    outputs: Vec<String>,
    steps: u64,
    fuel: Fuel,
}

impl Machine<'_> {
    fn tick(&mut self) -> Result<(), Stop> {
        if self.steps >= self.fuel.max_steps {
            return Err(Stop::Fuel);
        }
        self.steps += 1;
        Ok(())
    }

    fn run_block(&mut self, block: &[Op]) -> Result<(), Stop> {
        for op in block {
            match op {
                Op::Print(v) => {
                    self.tick()?;
                    let s = self.value(v)?;
                    if self.outputs.len() as u64 >= self.fuel.max_outputs {
                        return Err(Stop::Fuel);
                    }
                    self.outputs.push(s.as_str().to_string());
                }
                Op::Assign(slot, v) => {
                    self.tick()?;
                    let s = self.value(v)?;
                    self.env[*slot] = Some(s);
                }
                Op::Append(slot, parts) => {
                    self.tick()?;
                    let parts = parts
                        .iter()
                        .map(|p| self.value(p))
                        .collect::<Result<Vec<_>, _>>()?;
                    let Some(target) = self.env[*slot].as_mut() else {
                        return Err(self.unbound(*slot));
                    };
                    target.append(&parts)?;
                }
                Op::While(test, body) => loop {
                    self.tick()?;
                    if !self.test(test)? {
                        break;
                    }
                    self.run_block(body)?;
                },
                Op::If(test, then_body, else_body) => {
                    self.tick()?;
                    if self.test(test)? {
                        self.run_block(then_body)?;
                    } else {
                        self.run_block(else_body)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn unbound(&self, slot: usize) -> Stop {
        Stop::Error(RuntimeError::Unbound {
            name: self.names[slot].clone(),
            steps_used: self.steps,
        })
    }

    fn value(&self, v: &Val) -> Result<Str, Stop> {
        match v {
            Val::Lit(s) => Ok(s.clone()),
            Val::Var(slot) => self.env[*slot].clone().ok_or_else(|| self.unbound(*slot)),
            Val::Concat(parts) => {
                let mut values = parts.iter().map(|p| self.value(p));
                let mut first = values.next().expect("concat has operands")?;
                let rest = values.collect::<Result<Vec<_>, _>>()?;
                first.append(&rest)?;
                Ok(first)
            }
            Val::Head(inner) => {
                let s = self.value(inner)?;
                match s.as_str().chars().next() {
                    Some(c) => Ok(Str {
                        end: s.start + c.len_utf8(),
                        ..s
                    }),
                    None => Err(Stop::Error(RuntimeError::HeadOfEmpty {
                        steps_used: self.steps,
                    })),
                }
            }
            Val::Tail(inner) => {
                let s = self.value(inner)?;
                match s.as_str().chars().next() {
                    Some(c) => Ok(Str {
                        start: s.start + c.len_utf8(),
                        ..s
                    }),
                    None => Err(Stop::Error(RuntimeError::TailOfEmpty {
                        steps_used: self.steps,
                    })),
                }
            }
        }
    }

    fn test(&self, t: &Test) -> Result<bool, Stop> {
        match t {
            Test::True => Ok(true),
            Test::Equals(l, r) => Ok(self.value(l)?.as_str() == self.value(r)?.as_str()),
            Test::Not(inner) => Ok(!self.test(inner)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objlang::parse;

    fn run(src: &str, steps: u64, outputs: u64) -> Result<Trace, RuntimeError> {
        evaluate(&parse(src).unwrap(), Fuel::new(steps, outputs).unwrap())
    }

    #[test]
    fn fuel_must_be_positive() {
        assert!(Fuel::new(0, 1).is_err());
        assert!(Fuel::new(1, 0).is_err());
        assert!(Fuel::new(1, 1).is_ok());
    }

    #[test]
    fn end_halts_without_output() {
        let t = run("End", 1, 1).unwrap();
        assert_eq!(t.outputs, Vec::<String>::new());
        assert_eq!(t.status, Status::Halted);
        assert_eq!(t.steps_used, 0);
    }

    #[test]
    fn printing_exactly_max_outputs_still_halts() {
        let t = run("Print('a');Print('b');End", 100, 2).unwrap();
        assert_eq!(t.outputs, ["a", "b"]);
        assert_eq!(t.status, Status::Halted);
        let t = run("Print('a');Print('b');End", 100, 1).unwrap();
        assert_eq!(t.outputs, ["a"]);
        assert_eq!(t.status, Status::FuelExhausted);
    }

    #[test]
    fn loop_condition_costs_a_step() {
        let t = run("While(True){}End", 50, 1).unwrap();
        assert_eq!(t.status, Status::FuelExhausted);
        assert_eq!(t.steps_used, 50);
    }

    #[test]
    fn head_and_tail() {
        let t = run("X='abc';Print(Head(X));Print(Tail(X));Print(Tail(Tail(Tail(X))));End", 100, 10)
            .unwrap();
        assert_eq!(t.outputs, ["a", "bc", ""]);
    }

    #[test]
    fn head_of_empty_is_runtime_error() {
        assert!(matches!(
            run("Print(Head(''));End", 10, 10),
            Err(RuntimeError::HeadOfEmpty { steps_used: 1 })
        ));
        assert!(matches!(
            run("Print(Tail(''));End", 10, 10),
            Err(RuntimeError::TailOfEmpty { .. })
        ));
    }

    #[test]
    fn append_does_not_disturb_aliases() {
        let t = run("X='a';Y=X;X=X+'b';X=X+X;Print(X);Print(Y);End", 100, 10).unwrap();
        assert_eq!(t.outputs, ["abab", "a"]);
        let t = run("X='ab';Y=Tail(X);Y=Y+'c';X=X+'d';Print(X);Print(Y);End", 100, 10).unwrap();
        assert_eq!(t.outputs, ["abd", "bc"]);
        let t = run("X='ab';Y=Head(X);Y=Y+'c';Print(X);Print(Y);End", 100, 10).unwrap();
        assert_eq!(t.outputs, ["ab", "ac"]);
    }

    #[test]
    fn conditionals_and_equality() {
        let src = "X='aaa';N='';While(Not(Equals(X,''))){X=Tail(X);N=N+'1';}\
                   If(Equals(N,'111')){Print('three');}Else{Print('other');}End";
        let t = run(src, 1000, 10).unwrap();
        assert_eq!(t.outputs, ["three"]);
        assert_eq!(t.status, Status::Halted);
    }

    #[test]
    fn unbound_variable_in_handbuilt_ast() {
        use crate::objlang::{Expr, Ident, Program, Statement};
        let p = Program::new(vec![Statement::Print(Expr::Var(Ident::new("Q").unwrap()))]);
        assert!(matches!(
            evaluate(&p, Fuel::default()),
            Err(RuntimeError::Unbound { .. })
        ));
    }

    #[test]
    fn step_counter_advances() {
        let before = steps_executed();
        run("Print('a');Print('b');End", 10, 10).unwrap();
        assert_eq!(steps_executed() - before, 2);
    }

    #[test]
    fn runaway_doubling_stops_at_the_size_cap() {
        let t = run("A='ab';While(True){A=A+A;}End", 1000, 1).unwrap();
        assert_eq!(t.status, Status::FuelExhausted);
        assert!(t.steps_used < 60);
    }
}
