//! Populations of agents whose intelligence is an ordinal.
//!
//! A single creator can only make a child strictly less intelligent than
//! itself, so every single-parent chain is a descending sequence of ordinals
//! and must end. Children with several co-creators carry no such constraint;
//! the cap rule used here (natural sum of the parents plus a bonus) is one
//! modeling choice among many and is configurable.
//!
//! Agents are reduced to their ordinal. An agent's "code" is the canonical
//! notation of its intelligence, see [`Agent::enumerator`].

mod log;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::notation::compile;
use crate::objlang::{parse, ParseError, Program};
use crate::ordinals::{descent_step, Ordinal, OrdinalError, Picker};

pub use log::{chain_stats, read_jsonl, write_jsonl, ChainStats, LogError};

/// Picks for limit descents are drawn uniformly from `0..=DEFAULT_PICKER_MAX`.
pub const DEFAULT_PICKER_MAX: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Agent {
    pub id: u64,
    pub intelligence: Ordinal,
    pub parent_ids: Vec<u64>,
    pub generation: u64,
}

impl Agent {
    pub fn founder(id: u64, intelligence: Ordinal) -> Self {
        Agent {
            id,
            intelligence,
            parent_ids: Vec::new(),
            generation: 0,
        }
    }

    /// The agent's code: the canonical notation of its intelligence.
    pub fn enumerator(&self) -> Program {
        compile(&self.intelligence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EventKind {
    Asexual,
    Nondeterministic,
    MultiParent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LineageEvent {
    pub kind: EventKind,
    pub child_id: u64,
    pub parent_ids: Vec<u64>,
    pub child_intelligence: Ordinal,
    pub seed_used: u64,
    pub event_index: u64,
}

/// Where an event sits in a run: its position and the seed it drew.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stamp {
    pub event_index: u64,
    pub seed: u64,
}

/// Hands out fresh agent ids in increasing order.
#[derive(Debug, Clone, Default)]
pub struct IdGen {
    next: u64,
}

impl IdGen {
    pub fn starting_at(next: u64) -> Self {
        IdGen { next }
    }

    pub fn fresh(&mut self) -> u64 {
        let id = self.next;
        self.next += 1;
        id
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineageError {
    #[error("agent {agent_id} has intelligence 0 and cannot create")]
    SterileAgent { agent_id: u64 },
    #[error("multi-parent creation needs at least 2 parents, got {count}")]
    TooFewParents { count: usize },
    #[error("agent {id} is listed twice as a parent")]
    DuplicateParents { id: u64 },
    #[error("candidate count must be at least 1")]
    NoCandidates,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

fn child_of(parents: &[&Agent], id: u64, intelligence: Ordinal) -> Agent {
    Agent {
        id,
        intelligence,
        parent_ids: parents.iter().map(|p| p.id).collect(),
        generation: 1 + parents.iter().map(|p| p.generation).max().unwrap_or(0),
    }
}

fn event_for(kind: EventKind, child: &Agent, stamp: Stamp) -> LineageEvent {
    LineageEvent {
        kind,
        child_id: child.id,
        parent_ids: child.parent_ids.clone(),
        child_intelligence: child.intelligence.clone(),
        seed_used: stamp.seed,
        event_index: stamp.event_index,
    }
}

/// One creator: the child's intelligence is one descent step below the
/// parent's, with `picker` choosing the index at limits.
pub fn asexual_create(
    parent: &Agent,
    picker: &mut impl Picker,
    ids: &mut IdGen,
    stamp: Stamp,
) -> Result<(Agent, LineageEvent), LineageError> {
    let intelligence = descent_step(&parent.intelligence, picker).ok_or(
        LineageError::SterileAgent {
            agent_id: parent.id,
        },
    )?;
    assert!(intelligence < parent.intelligence);
    let child = child_of(&[parent], ids.fresh(), intelligence);
    let event = event_for(EventKind::Asexual, &child, stamp);
    Ok((child, event))
}

/// One creator using randomness: `k` independent descent steps are taken
/// and one of the results is kept, chosen uniformly.
pub fn nondeterministic_create(
    parent: &Agent,
    k: usize,
    rng: &mut impl Rng,
    picker_max: u64,
    ids: &mut IdGen,
    stamp: Stamp,
) -> Result<(Agent, LineageEvent), LineageError> {
    if k == 0 {
        return Err(LineageError::NoCandidates);
    }
    let mut candidates = Vec::with_capacity(k);
    for _ in 0..k {
        let mut pick = |_: &Ordinal| rng.gen_range(0..=picker_max);
        let c = descent_step(&parent.intelligence, &mut pick).ok_or(
            LineageError::SterileAgent {
                agent_id: parent.id,
            },
        )?;
        candidates.push(c);
    }
    let intelligence = candidates.swap_remove(rng.gen_range(0..k));
    assert!(intelligence < parent.intelligence);
    let child = child_of(&[parent], ids.fresh(), intelligence);
    let event = event_for(EventKind::Nondeterministic, &child, stamp);
    Ok((child, event))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum MultiParentRule {
    /// The child gets exactly the cap.
    Cap,
    /// The child gets the cap after `0..=max_steps` descent steps.
    DescendFromCap { max_steps: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct MultiParentConfig {
    pub bonus: Ordinal,
    pub rule: MultiParentRule,
}

impl Default for MultiParentConfig {
    fn default() -> Self {
        MultiParentConfig {
            bonus: Ordinal::omega(),
            rule: MultiParentRule::Cap,
        }
    }
}

/// Several co-creators. The cap is the natural sum of the parents'
/// intelligences plus `config.bonus`; nothing forces the child below any
/// parent.
pub fn multi_parent_create(
    parents: &[&Agent],
    config: &MultiParentConfig,
    rng: &mut impl Rng,
    picker_max: u64,
    ids: &mut IdGen,
    stamp: Stamp,
) -> Result<(Agent, LineageEvent), LineageError> {
    if parents.len() < 2 {
        return Err(LineageError::TooFewParents {
            count: parents.len(),
        });
    }
    for (i, p) in parents.iter().enumerate() {
        if parents[..i].iter().any(|q| q.id == p.id) {
            return Err(LineageError::DuplicateParents { id: p.id });
        }
    }
    let mut cap = Ordinal::zero();
    for p in parents {
        cap = cap.natural_sum(&p.intelligence)?;
    }
    let mut intelligence = cap.add(&config.bonus)?;
    if let MultiParentRule::DescendFromCap { max_steps } = config.rule {
        let steps = rng.gen_range(0..=max_steps);
        for _ in 0..steps {
            let mut pick = |_: &Ordinal| rng.gen_range(0..=picker_max);
            match descent_step(&intelligence, &mut pick) {
                Some(next) => intelligence = next,
                None => break,
            }
        }
    }
    let child = child_of(parents, ids.fresh(), intelligence);
    let event = event_for(EventKind::MultiParent, &child, stamp);
    Ok((child, event))
}

/// The parent's witness for a child's code. Agents are object-language
/// enumerators, so embedding the child's code is a plain paste: the text is
/// parsed, never run.
pub fn witness_notation(child_code: &str) -> Result<Program, ParseError> {
    parse(child_code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Always create asexually from the latest agent.
    AsexualOnly,
    /// Every `k`-th event is a two-parent creation.
    MixedEveryK(u64),
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::AsexualOnly => f.write_str("asexual"),
            Policy::MixedEveryK(k) => write!(f, "mixed:{k}"),
        }
    }
}

impl FromStr for Policy {
    type Err = LineageError;

    /// `asexual` or `mixed:<k>` with `k ≥ 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "asexual" {
            return Ok(Policy::AsexualOnly);
        }
        let bad = || LineageError::InvalidConfig(format!("unknown policy `{s}`"));
        let k: u64 = s
            .strip_prefix("mixed:")
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        if k == 0 {
            return Err(LineageError::InvalidConfig("k must be at least 1".into()));
        }
        Ok(Policy::MixedEveryK(k))
    }
}

impl Serialize for Policy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Policy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LineageConfig {
    pub founder_intelligences: Vec<Ordinal>,
    pub policy: Policy,
    #[serde(default)]
    pub rng_seed: u64,
    pub max_events: u64,
    #[serde(default)]
    pub multi_parent: MultiParentConfig,
    /// When set, single-parent events are nondeterministic with this many
    /// candidates.
    #[serde(default)]
    pub candidates: Option<usize>,
    #[serde(default = "default_picker_max")]
    pub picker_max: u64,
}

fn default_picker_max() -> u64 {
    DEFAULT_PICKER_MAX
}

impl LineageConfig {
    pub fn new(founder_intelligences: Vec<Ordinal>, policy: Policy, rng_seed: u64, max_events: u64) -> Self {
        LineageConfig {
            founder_intelligences,
            policy,
            rng_seed,
            max_events,
            multi_parent: MultiParentConfig::default(),
            candidates: None,
            picker_max: DEFAULT_PICKER_MAX,
        }
    }

    pub fn validate(&self) -> Result<(), LineageError> {
        let bad = |m: &str| Err(LineageError::InvalidConfig(m.into()));
        if self.founder_intelligences.is_empty() {
            return bad("at least one founder is required");
        }
        if self.max_events == 0 {
            return bad("maxEvents must be at least 1");
        }
        if self.policy == Policy::MixedEveryK(0) {
            return bad("k must be at least 1");
        }
        if self.candidates == Some(0) {
            return bad("candidates must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Termination {
    /// No agent could create any more. `chain_length` counts the agents on
    /// the single-parent chain ending at `agent_id`, founder included.
    Sterile { agent_id: u64, chain_length: u64 },
    MaxEvents { event_count: u64 },
    /// An ordinal outgrew the representation (coefficients are 64-bit).
    Overflow { event_index: u64, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventLog {
    pub founders: Vec<Agent>,
    pub events: Vec<LineageEvent>,
    pub termination: Termination,
}

/// Runs a seeded simulation. Each event draws its own seed from a master
/// generator seeded with `config.rng_seed`, so equal configs give equal logs.
pub fn run_lineage(config: &LineageConfig) -> Result<EventLog, LineageError> {
    config.validate()?;
    let mut agents: Vec<Agent> = config
        .founder_intelligences
        .iter()
        .enumerate()
        .map(|(i, a)| Agent::founder(i as u64, a.clone()))
        .collect();
    let founders = agents.clone();
    let mut ids = IdGen::starting_at(agents.len() as u64);
    let mut master = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut events = Vec::new();
    // single-parent chain length (in agents) ending at each agent
    let mut chain: Vec<u64> = vec![1; agents.len()];

    for event_index in 0..config.max_events {
        let stamp = Stamp {
            event_index,
            seed: master.next_u64(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(stamp.seed);
        let multi = match config.policy {
            Policy::MixedEveryK(k) => (event_index + 1) % k == 0 && agents.len() >= 2,
            Policy::AsexualOnly => false,
        };
        let created = if multi {
            let (a, b) = two_most_intelligent(&agents);
            multi_parent_create(
                &[&agents[a], &agents[b]],
                &config.multi_parent,
                &mut rng,
                config.picker_max,
                &mut ids,
                stamp,
            )
        } else {
            let Some(parent) = single_parent(&agents, config.policy) else {
                let last = agents.last().expect("founders are nonempty");
                return Ok(EventLog {
                    founders,
                    events,
                    termination: Termination::Sterile {
                        agent_id: last.id,
                        chain_length: chain[last.id as usize],
                    },
                });
            };
            let parent = &agents[parent];
            match config.candidates {
                Some(k) => nondeterministic_create(
                    parent,
                    k,
                    &mut rng,
                    config.picker_max,
                    &mut ids,
                    stamp,
                ),
                None => {
                    let mut pick = |_: &Ordinal| rng.gen_range(0..=config.picker_max);
                    asexual_create(parent, &mut pick, &mut ids, stamp)
                }
            }
        };
        let (child, event) = match created {
            Ok(c) => c,
            Err(LineageError::Ordinal(e)) => {
                return Ok(EventLog {
                    founders,
                    events,
                    termination: Termination::Overflow {
                        event_index,
                        message: e.to_string(),
                    },
                })
            }
            Err(e) => return Err(e),
        };
        chain.push(match child.parent_ids[..] {
            [p] => chain[p as usize] + 1,
            _ => 1,
        });
        agents.push(child);
        events.push(event);
    }
    Ok(EventLog {
        founders,
        events,
        termination: Termination::MaxEvents {
            event_count: config.max_events,
        },
    })
}

/// Indices of the two most intelligent agents; ties go to the lower id.
fn two_most_intelligent(agents: &[Agent]) -> (usize, usize) {
    let mut order: Vec<usize> = (0..agents.len()).collect();
    order.sort_by(|&a, &b| {
        agents[b]
            .intelligence
            .cmp(&agents[a].intelligence)
            .then(a.cmp(&b))
    });
    (order[0], order[1])
}

/// Asexual policy: the latest agent, if it can still create. Mixed policy
/// falls back to the most intelligent agent that can.
fn single_parent(agents: &[Agent], policy: Policy) -> Option<usize> {
    let last = agents.len() - 1;
    if !agents[last].intelligence.is_zero() {
        return Some(last);
    }
    if policy == Policy::AsexualOnly {
        return None;
    }
    let best = (0..agents.len()).max_by(|&a, &b| {
        agents[a]
            .intelligence
            .cmp(&agents[b].intelligence)
            .then(b.cmp(&a))
    })?;
    (!agents[best].intelligence.is_zero()).then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinals::parse_ordinal;

    fn o(s: &str) -> Ordinal {
        parse_ordinal(s).unwrap()
    }

    fn agent(id: u64, s: &str) -> Agent {
        Agent::founder(id, o(s))
    }

    #[test]
    fn asexual_examples() {
        let mut ids = IdGen::starting_at(10);
        let (c, e) =
            asexual_create(&agent(0, "w+1"), &mut |_: &Ordinal| 0, &mut ids, Stamp::default())
                .unwrap();
        assert_eq!(c.intelligence, o("w"));
        assert_eq!((c.id, c.generation, e.parent_ids), (10, 1, vec![0]));
        let (c, _) =
            asexual_create(&agent(0, "w"), &mut |_: &Ordinal| 4, &mut ids, Stamp::default())
                .unwrap();
        assert_eq!(c.intelligence, o("4"));
        assert_eq!(
            asexual_create(&agent(7, "0"), &mut |_: &Ordinal| 4, &mut ids, Stamp::default()),
            Err(LineageError::SterileAgent { agent_id: 7 })
        );
    }

    #[test]
    fn nondeterministic_examples() {
        let mut ids = IdGen::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (c, e) =
            nondeterministic_create(&agent(0, "3"), 2, &mut rng, 16, &mut ids, Stamp::default())
                .unwrap();
        assert_eq!(c.intelligence, o("2"));
        assert_eq!(e.kind, EventKind::Nondeterministic);
        for _ in 0..20 {
            let (c, _) = nondeterministic_create(
                &agent(0, "w+1"),
                5,
                &mut rng,
                16,
                &mut ids,
                Stamp::default(),
            )
            .unwrap();
            assert!(c.intelligence <= o("w"));
        }
        assert!(matches!(
            nondeterministic_create(&agent(0, "0"), 2, &mut rng, 16, &mut ids, Stamp::default()),
            Err(LineageError::SterileAgent { .. })
        ));
    }

    #[test]
    fn multi_parent_examples() {
        let mut ids = IdGen::starting_at(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cap0 = MultiParentConfig {
            bonus: Ordinal::zero(),
            rule: MultiParentRule::Cap,
        };
        let (a, b) = (agent(0, "3"), agent(1, "5"));
        let (c, e) =
            multi_parent_create(&[&a, &b], &cap0, &mut rng, 16, &mut ids, Stamp::default())
                .unwrap();
        assert_eq!(c.intelligence, o("8"));
        assert_eq!(e.parent_ids, [0, 1]);

        let (a, b) = (agent(0, "w"), agent(1, "w"));
        let (c, _) =
            multi_parent_create(&[&a, &b], &cap0, &mut rng, 16, &mut ids, Stamp::default())
                .unwrap();
        assert!(c.intelligence >= o("w"));

        assert_eq!(
            multi_parent_create(&[&a], &cap0, &mut rng, 16, &mut ids, Stamp::default()),
            Err(LineageError::TooFewParents { count: 1 })
        );
        assert_eq!(
            multi_parent_create(&[&a, &a], &cap0, &mut rng, 16, &mut ids, Stamp::default()),
            Err(LineageError::DuplicateParents { id: 0 })
        );
    }

    #[test]
    fn descend_from_cap_stays_at_or_below_cap() {
        let config = MultiParentConfig {
            bonus: o("w"),
            rule: MultiParentRule::DescendFromCap { max_steps: 3 },
        };
        let (a, b) = (agent(0, "w"), agent(1, "2"));
        let mut ids = IdGen::starting_at(2);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (c, _) =
                multi_parent_create(&[&a, &b], &config, &mut rng, 16, &mut ids, Stamp::default())
                    .unwrap();
            assert!(c.intelligence <= o("w*2+2"));
        }
    }

    #[test]
    fn founder_two_runs_down_to_zero() {
        let log = run_lineage(&LineageConfig::new(vec![o("2")], Policy::AsexualOnly, 0, 100)).unwrap();
        let chain: Vec<String> = log
            .events
            .iter()
            .map(|e| e.child_intelligence.to_string())
            .collect();
        assert_eq!(chain, ["1", "0"]);
        assert_eq!(
            log.termination,
            Termination::Sterile {
                agent_id: 2,
                chain_length: 3
            }
        );
    }

    #[test]
    fn founder_omega_chain_length() {
        for seed in 0..10 {
            let log =
                run_lineage(&LineageConfig::new(vec![o("w")], Policy::AsexualOnly, seed, 1000)).unwrap();
            let first = log.events[0].child_intelligence.as_finite().unwrap();
            assert!(first <= DEFAULT_PICKER_MAX);
            // ω, then first, first-1, …, 0
            assert_eq!(log.founders.len() + log.events.len(), first as usize + 2);
        }
    }

    #[test]
    fn mixed_policy_keeps_going() {
        let config = LineageConfig::new(vec![o("w")], Policy::MixedEveryK(3), 5, 100);
        let log = run_lineage(&config).unwrap();
        assert_eq!(log.events.len(), 100);
        let multi = log
            .events
            .iter()
            .filter(|e| e.kind == EventKind::MultiParent)
            .count();
        assert_eq!(multi, 33);
        assert_eq!(log.termination, Termination::MaxEvents { event_count: 100 });
        assert_eq!(run_lineage(&config).unwrap(), log);
    }

    #[test]
    fn policy_syntax() {
        assert_eq!("asexual".parse::<Policy>().unwrap(), Policy::AsexualOnly);
        assert_eq!("mixed:3".parse::<Policy>().unwrap(), Policy::MixedEveryK(3));
        assert!("mixed:0".parse::<Policy>().is_err());
        assert!("mixed".parse::<Policy>().is_err());
        assert_eq!(Policy::MixedEveryK(4).to_string(), "mixed:4");
    }

    #[test]
    fn invalid_configs() {
        assert!(run_lineage(&LineageConfig::new(vec![], Policy::AsexualOnly, 0, 5)).is_err());
        assert!(run_lineage(&LineageConfig::new(vec![o("1")], Policy::AsexualOnly, 0, 0)).is_err());
    }

    #[test]
    fn witness_is_a_paste() {
        let code = crate::objlang::serialize(&compile(&Ordinal::omega()));
        let before = crate::objlang::steps_executed();
        let w = witness_notation(&code).unwrap();
        assert_eq!(crate::objlang::steps_executed(), before);
        assert_eq!(w, compile(&Ordinal::omega()));
        assert!(witness_notation("Print(").is_err());
    }
}
