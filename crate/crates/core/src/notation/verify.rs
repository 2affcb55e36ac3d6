//! Fuel-bounded membership checking.
//!
//! The explorer runs the root program, parses each output, and queues the
//! parsed outputs for their own runs, breadth-first in emission order. It
//! stops at the first refutation it meets, so a reported path is always a
//! shortest one. Verdicts are then folded bottom-up over the explored tree.
//!
//! The steps a program leaves unused are split evenly among its outputs,
//! remainder to the earliest, so the whole exploration never runs more than
//! `max_steps` steps. Every run gets the full `max_outputs`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::objlang::{evaluate, parse, Fuel, ParseError, Program, RuntimeError, Status};
use crate::ordinals::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Verdict {
    /// Every reachable output was checked and every run halted.
    ProvenMember { value: Ordinal },
    /// Following `path` (output indices from the root) reaches text that
    /// is not a program, or a program whose run fails.
    Refuted { path: Vec<usize>, reason: Refutation },
    Inconclusive {
        outputs_checked: usize,
        depth_reached: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Refutation {
    Parse(ParseError),
    Runtime(RuntimeError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FuelSpent {
    pub steps: u64,
    pub programs_run: u64,
    pub outputs_parsed: u64,
}

/// Verdict for one direct output of the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChildReport {
    pub index: usize,
    pub verdict: Verdict,
    pub lower_bound: Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verification {
    pub verdict: Verdict,
    /// Smallest ordinal above the bounds of all observed outputs.
    pub lower_bound: Ordinal,
    pub fuel_spent: FuelSpent,
    pub children: Vec<ChildReport>,
}

/// A value lower bound; `refuted` marks programs shown not to be notations,
/// whose value is undefined and reported as 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValueBound {
    pub bound: Ordinal,
    pub refuted: bool,
}

enum Outcome {
    /// Never reached: exploration stopped early, or no steps were left.
    Unexplored,
    ParseFailed(ParseError),
    Failed(RuntimeError),
    Ran { halted: bool, children: Vec<usize> },
}

struct Node {
    program: Option<Program>,
    steps: u64,
    level: usize,
    outcome: Outcome,
}

struct Folded {
    verdict: Verdict,
    bound: Ordinal,
    depth_reached: usize,
}

/// Checks `p` against the notation definition, running at most `max_depth`
/// levels of programs (the root is level 1).
pub fn verify(p: &Program, fuel: Fuel, max_depth: usize) -> Verification {
    let mut spent = FuelSpent::default();
    let mut arena = vec![Node {
        program: Some(p.clone()),
        steps: fuel.max_steps(),
        level: 1,
        outcome: Outcome::Unexplored,
    }];
    if max_depth >= 1 {
        explore(&mut arena, fuel.max_outputs(), max_depth, &mut spent);
    }

    let mut folded: Vec<Option<Folded>> = (0..arena.len()).map(|_| None).collect();
    for id in (0..arena.len()).rev() {
        folded[id] = Some(fold(&arena[id], &mut folded));
    }
    let root = folded[0].take().expect("root folded");
    let children = match &arena[0].outcome {
        Outcome::Ran { children, .. } => children
            .iter()
            .enumerate()
            .map(|(index, &c)| {
                let f = folded[c].take().expect("child folded");
                ChildReport {
                    index,
                    verdict: f.verdict,
                    lower_bound: f.bound,
                }
            })
            .collect(),
        _ => Vec::new(),
    };
    Verification {
        verdict: root.verdict,
        lower_bound: root.bound,
        fuel_spent: spent,
        children,
    }
}

/// A lower bound on the value of `p`; 0 with `refuted` set when the
/// exploration shows `p` is not a notation.
pub fn value_lower_bound(p: &Program, fuel: Fuel, max_depth: usize) -> ValueBound {
    let v = verify(p, fuel, max_depth);
    match v.verdict {
        Verdict::Refuted { .. } => ValueBound {
            bound: Ordinal::zero(),
            refuted: true,
        },
        _ => ValueBound {
            bound: v.lower_bound,
            refuted: false,
        },
    }
}

fn explore(arena: &mut Vec<Node>, max_outputs: u64, max_depth: usize, spent: &mut FuelSpent) {
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let node = &mut arena[id];
        let program = node.program.take().expect("queued nodes hold a program");
        let fuel = Fuel::new(node.steps, max_outputs).expect("queued nodes have steps");
        let (steps, level) = (node.steps, node.level);
        spent.programs_run += 1;
        let trace = match evaluate(&program, fuel) {
            Ok(t) => t,
            Err(e) => {
                spent.steps += e.steps_used();
                node.outcome = Outcome::Failed(e);
                return;
            }
        };
        spent.steps += trace.steps_used;
        let left = steps - trace.steps_used;
        let count = trace.outputs.len() as u64;

        let mut children = Vec::with_capacity(trace.outputs.len());
        let mut refuted = false;
        for (i, text) in trace.outputs.iter().enumerate() {
            let child = arena.len();
            children.push(child);
            let mut node = Node {
                program: None,
                steps: left / count + u64::from((i as u64) < left % count),
                level: level + 1,
                outcome: Outcome::Unexplored,
            };
            if level < max_depth && !refuted {
                spent.outputs_parsed += 1;
                match parse(text) {
                    Ok(p) if node.steps > 0 => {
                        node.program = Some(p);
                        queue.push_back(child);
                    }
                    Ok(_) => {}
                    Err(e) => {
                        node.outcome = Outcome::ParseFailed(e);
                        refuted = true;
                    }
                }
            }
            arena.push(node);
        }
        arena[id].outcome = Outcome::Ran {
            halted: trace.status == Status::Halted,
            children,
        };
        if refuted {
            return;
        }
    }
}

fn fold(node: &Node, folded: &mut [Option<Folded>]) -> Folded {
    let refuted = |reason| Folded {
        verdict: Verdict::Refuted {
            path: Vec::new(),
            reason,
        },
        bound: Ordinal::zero(),
        depth_reached: node.level,
    };
    let (halted, children) = match &node.outcome {
        Outcome::Unexplored => {
            return Folded {
                verdict: Verdict::Inconclusive {
                    outputs_checked: 0,
                    depth_reached: 0,
                },
                bound: Ordinal::zero(),
                depth_reached: 0,
            }
        }
        Outcome::ParseFailed(e) => return refuted(Refutation::Parse(e.clone())),
        Outcome::Failed(e) => return refuted(Refutation::Runtime(e.clone())),
        Outcome::Ran { halted, children } => (*halted, children),
    };

    let mut bound = Ordinal::zero();
    let mut depth_reached = node.level;
    let mut all_proven = halted;
    let mut outputs_checked = 0;
    for (i, &c) in children.iter().enumerate() {
        let child = folded[c].as_ref().expect("children fold first");
        if let Verdict::Refuted { path, reason } = &child.verdict {
            let mut full = vec![i];
            full.extend_from_slice(path);
            return Folded {
                verdict: Verdict::Refuted {
                    path: full,
                    reason: reason.clone(),
                },
                bound: Ordinal::zero(),
                depth_reached: depth_reached.max(child.depth_reached),
            };
        }
        let above = child.bound.successor().expect("bounds stay below the depth limit");
        bound = bound.max(above);
        depth_reached = depth_reached.max(child.depth_reached);
        if child.depth_reached > 0 {
            outputs_checked += 1;
        }
        all_proven &= matches!(child.verdict, Verdict::ProvenMember { .. });
    }
    let verdict = if all_proven {
        Verdict::ProvenMember {
            value: bound.clone(),
        }
    } else {
        Verdict::Inconclusive {
            outputs_checked,
            depth_reached,
        }
    };
    Folded {
        verdict,
        bound,
        depth_reached,
    }
}
