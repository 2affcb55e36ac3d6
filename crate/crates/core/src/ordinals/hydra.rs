//! The Kirby–Paris hydra, with the usual ordinal assignment: a node with
//! children `c₁ … cₖ` is worth the natural sum of `ω^value(cᵢ)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Ordinal, OrdinalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HydraError {
    #[error("the hydra has no heads left")]
    DeadHydra,
    #[error("stage must be at least 1")]
    ZeroStage,
    #[error("position {position}: malformed hydra shape")]
    BadShape { position: usize },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A finite rooted tree; leaves other than the root are heads.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HydraTree {
    pub children: Vec<HydraTree>,
}

impl HydraTree {
    pub fn leaf() -> Self {
        HydraTree::default()
    }

    pub fn node(children: Vec<HydraTree>) -> Self {
        HydraTree { children }
    }

    pub fn is_dead(&self) -> bool {
        self.children.is_empty()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(HydraTree::node_count).sum::<usize>()
    }

    pub fn to_ordinal(&self) -> Result<Ordinal, OrdinalError> {
        self.children.iter().try_fold(Ordinal::zero(), |acc, c| {
            acc.natural_sum(&Ordinal::omega_pow(&c.to_ordinal()?)?)
        })
    }

    /// Cuts the leftmost of the deepest heads. If its parent is not the
    /// root, the grandparent ends up holding `stage` copies of the
    /// trimmed parent (the trimmed original plus `stage - 1` clones placed
    /// right after it).
    pub fn step(&self, stage: u64) -> Result<HydraTree, HydraError> {
        if stage == 0 {
            return Err(HydraError::ZeroStage);
        }
        if self.is_dead() {
            return Err(HydraError::DeadHydra);
        }
        let path = self.deepest_head();
        let mut next = self.clone();
        if let [head] = path[..] {
            next.children.remove(head);
            return Ok(next);
        }
        let (grand_path, rest) = path.split_at(path.len() - 2);
        let (parent_idx, head_idx) = (rest[0], rest[1]);
        let grandparent = grand_path
            .iter()
            .fold(&mut next, |node, &i| &mut node.children[i]);
        grandparent.children[parent_idx].children.remove(head_idx);
        let trimmed = grandparent.children[parent_idx].clone();
        let copies = std::iter::repeat_n(trimmed, (stage - 1) as usize);
        let at = parent_idx + 1;
        grandparent.children.splice(at..at, copies);
        Ok(next)
    }

    /// Index path from the root to the leftmost head of maximal depth.
    fn deepest_head(&self) -> Vec<usize> {
        fn walk(node: &HydraTree, path: &mut Vec<usize>, best: &mut Vec<usize>) {
            if node.children.is_empty() {
                if path.len() > best.len() {
                    *best = path.clone();
                }
                return;
            }
            for (i, c) in node.children.iter().enumerate() {
                path.push(i);
                walk(c, path, best);
                path.pop();
            }
        }
        let mut best = Vec::new();
        walk(self, &mut Vec::new(), &mut best);
        best
    }

    /// Plays stages 1, 2, 3, … until the hydra dies or `max_steps` cuts have
    /// been made. Returns every tree visited, starting with `self`.
    pub fn battle(&self, max_steps: usize) -> Result<Vec<HydraTree>, HydraError> {
        let mut history = vec![self.clone()];
        for stage in 1..=max_steps as u64 {
            let current = history.last().expect("nonempty");
            if current.is_dead() {
                break;
            }
            let next = current.step(stage)?;
            history.push(next);
        }
        Ok(history)
    }

    /// Every rooted unordered tree with exactly `nodes` nodes, one
    /// representative per shape.
    pub fn all_with_nodes(nodes: usize) -> Vec<HydraTree> {
        if nodes == 0 {
            return Vec::new();
        }
        // forests with `nodes - 1` nodes, children in non-increasing order
        let mut out = Vec::new();
        forests(nodes - 1, None, &mut Vec::new(), &mut out);
        out.into_iter().map(HydraTree::node).collect()
    }
}

fn forests(
    remaining: usize,
    max: Option<&HydraTree>,
    current: &mut Vec<HydraTree>,
    out: &mut Vec<Vec<HydraTree>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for size in (1..=remaining).rev() {
        for t in HydraTree::all_with_nodes(size) {
            if max.is_some_and(|m| shape_key(&t) > shape_key(m)) {
                continue;
            }
            current.push(t.clone());
            forests(remaining - size, Some(&t), current, out);
            current.pop();
        }
    }
}

// Canonical string of a shape, used to order siblings.
fn shape_key(t: &HydraTree) -> String {
    let mut keys: Vec<String> = t.children.iter().map(shape_key).collect();
    keys.sort_unstable_by(|a, b| b.cmp(a));
    format!("({})", keys.concat())
}

impl fmt::Display for HydraTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for HydraTree {
    type Err = HydraError;

    /// Bracket notation for the root, e.g. `(()(()))`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes: Vec<(usize, u8)> = s
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        let mut stack: Vec<HydraTree> = Vec::new();
        let mut root = None;
        for &(pos, b) in &bytes {
            if root.is_some() {
                return Err(HydraError::BadShape { position: pos });
            }
            match b {
                b'(' => stack.push(HydraTree::leaf()),
                b')' => {
                    let done = stack.pop().ok_or(HydraError::BadShape { position: pos })?;
                    match stack.last_mut() {
                        Some(parent) => parent.children.push(done),
                        None => root = Some(done),
                    }
                }
                _ => return Err(HydraError::BadShape { position: pos }),
            }
        }
        root.ok_or(HydraError::BadShape { position: s.len() })
    }
}
