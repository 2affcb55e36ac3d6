mod common;

use std::collections::HashMap;

use ion_core::lineage::{
    chain_stats, read_jsonl, run_lineage, witness_notation, write_jsonl, Agent, EventKind,
    EventLog, LineageConfig, MultiParentRule, Policy, Termination,
};
use ion_core::objlang::{evaluate, serialize, steps_executed, Fuel};
use ion_core::ordinals::Ordinal;
use proptest::prelude::*;

fn intelligences(log: &EventLog) -> HashMap<u64, (Ordinal, u64)> {
    let mut known: HashMap<u64, (Ordinal, u64)> = log
        .founders
        .iter()
        .map(|a| (a.id, (a.intelligence.clone(), 0)))
        .collect();
    for e in &log.events {
        let generation = 1 + e.parent_ids.iter().map(|p| known[p].1).max().unwrap();
        known.insert(e.child_id, (e.child_intelligence.clone(), generation));
    }
    known
}

fn founders() -> impl Strategy<Value = Vec<Ordinal>> {
    prop::collection::vec(common::ordinal(2), 1..4)
}

fn policy() -> impl Strategy<Value = Policy> {
    prop_oneof![Just(Policy::AsexualOnly), (1u64..5).prop_map(Policy::MixedEveryK)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_parent_events_strictly_decrease(
        founders in founders(),
        policy in policy(),
        seed in any::<u64>(),
        candidates in prop::option::of(1usize..4),
    ) {
        let mut config = LineageConfig::new(founders, policy, seed, 300);
        config.candidates = candidates;
        let log = run_lineage(&config).unwrap();
        let known = intelligences(&log);
        for e in &log.events {
            match e.kind {
                EventKind::MultiParent => prop_assert!(e.parent_ids.len() >= 2),
                EventKind::Asexual | EventKind::Nondeterministic => {
                    prop_assert_eq!(e.parent_ids.len(), 1);
                    prop_assert!(e.child_intelligence < known[&e.parent_ids[0]].0);
                }
            }
        }
        if candidates.is_some() {
            prop_assert!(log.events.iter().all(|e| e.kind != EventKind::Asexual));
        }
    }

    #[test]
    fn asexual_runs_always_end_sterile(founder in common::ordinal(2), seed in any::<u64>()) {
        let log = run_lineage(&LineageConfig::new(vec![founder], Policy::AsexualOnly, seed, 1_000_000)).unwrap();
        let Termination::Sterile { agent_id, chain_length } = log.termination else {
            panic!("run did not end sterile");
        };
        prop_assert_eq!(chain_length, 1 + log.events.len() as u64);
        prop_assert_eq!(agent_id, log.events.last().map_or(0, |e| e.child_id));
        prop_assert_eq!(chain_stats(&log).max_asexual_run_length, log.events.len() as u64);
    }

    #[test]
    fn equal_configs_give_equal_logs(founders in founders(), policy in policy(), seed in any::<u64>()) {
        let config = LineageConfig::new(founders, policy, seed, 200);
        let a = write_jsonl(&run_lineage(&config).unwrap());
        let b = write_jsonl(&run_lineage(&config).unwrap());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(write_jsonl(&read_jsonl(&a).unwrap()), a);
    }

    #[test]
    fn stats_match_the_log(founders in founders(), k in 1u64..5, seed in any::<u64>()) {
        let log = run_lineage(&LineageConfig::new(founders, Policy::MixedEveryK(k), seed, 120)).unwrap();
        let stats = chain_stats(&log);
        prop_assert_eq!(stats.total_agents as usize, log.founders.len() + log.events.len());
        let multi = log.events.iter().filter(|e| e.kind == EventKind::MultiParent).count() as u64;
        prop_assert_eq!(stats.multi_parent_count, multi);
        prop_assert_eq!(stats.intelligence_time_series.len(), log.events.len());
    }
}

#[test]
fn mixed_runs_reach_max_events_with_expected_multi_count() {
    for k in 2..=5u64 {
        let config = LineageConfig::new(vec![Ordinal::omega()], Policy::MixedEveryK(k), 3, 100);
        let log = run_lineage(&config).unwrap();
        assert_eq!(log.termination, Termination::MaxEvents { event_count: 100 });
        assert_eq!(chain_stats(&log).multi_parent_count, 100 / k, "k={k}");
    }
}

#[test]
fn coefficient_overflow_ends_the_run() {
    // every event merges the two best agents, so the coefficient of ω grows
    // like the Fibonacci numbers and leaves 64 bits before event 100
    let config = LineageConfig::new(vec![Ordinal::omega()], Policy::MixedEveryK(1), 3, 1000);
    let log = run_lineage(&config).unwrap();
    let Termination::Overflow { event_index, .. } = log.termination else {
        panic!("expected overflow, got {:?}", log.termination);
    };
    assert_eq!(event_index, log.events.len() as u64);
    assert!(event_index < 100);
}

#[test]
fn children_can_match_or_exceed_both_parents() {
    let config = LineageConfig::new(vec![Ordinal::omega()], Policy::MixedEveryK(3), 1, 30);
    let log = run_lineage(&config).unwrap();
    let known = intelligences(&log);
    let loophole = log.events.iter().any(|e| {
        e.kind == EventKind::MultiParent
            && e.parent_ids.iter().all(|p| e.child_intelligence >= known[p].0)
    });
    assert!(loophole);
}

#[test]
fn descend_from_cap_rule_runs() {
    let mut config = LineageConfig::new(vec![Ordinal::omega()], Policy::MixedEveryK(2), 9, 60);
    config.multi_parent.rule = MultiParentRule::DescendFromCap { max_steps: 4 };
    let log = run_lineage(&config).unwrap();
    assert_eq!(log.events.len(), 60);
}

#[test]
fn generations_follow_parents() {
    let config = LineageConfig::new(vec![Ordinal::omega(), Ordinal::from(5)], Policy::MixedEveryK(2), 4, 40);
    let log = run_lineage(&config).unwrap();
    let known = intelligences(&log);
    assert!(known.values().any(|(_, g)| *g > 1));
}

#[test]
fn witnesses_reproduce_agent_outputs() {
    let config = LineageConfig::new(vec![Ordinal::omega().mul(&Ordinal::from(2)).unwrap()], Policy::AsexualOnly, 2, 100);
    let log = run_lineage(&config).unwrap();
    let fuel = Fuel::new(1_000_000, 8).unwrap();
    for e in &log.events {
        let agent = Agent::founder(e.child_id, e.child_intelligence.clone());
        let code = serialize(&agent.enumerator());
        let before = steps_executed();
        let witness = witness_notation(&code).unwrap();
        assert_eq!(steps_executed(), before);
        assert_eq!(evaluate(&witness, fuel), evaluate(&agent.enumerator(), fuel));
    }
    assert_eq!(evaluate(&witness_notation("End").unwrap(), fuel).unwrap().outputs, Vec::<String>::new());
}

#[test]
fn config_json_defaults() {
    let config: LineageConfig =
        serde_json::from_str(r#"{"founderIntelligences":["w+1","3"],"policy":"mixed:3","maxEvents":10}"#).unwrap();
    assert_eq!(config.policy, Policy::MixedEveryK(3));
    assert_eq!(config.multi_parent.bonus, Ordinal::omega());
    assert_eq!(config.picker_max, 16);
    assert_eq!(run_lineage(&config).unwrap().events.len(), 10);
}
