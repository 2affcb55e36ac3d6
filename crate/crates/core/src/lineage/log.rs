//! JSON-lines persistence and summary statistics for event logs.
//!
//! A log file holds one `founder` line per founder, one line per event, and
//! a final line describing how the run ended.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Agent, EventKind, EventLog, LineageEvent, Termination};
use crate::ordinals::Ordinal;

#[derive(Debug, Error)]
pub enum LogError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: {message}")]
    Structure { line: usize, message: String },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct EventLine {
    child_id: u64,
    parent_ids: Vec<u64>,
    child_intelligence: Ordinal,
    seed_used: u64,
    event_index: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
enum Line {
    Founder {
        child_id: u64,
        child_intelligence: Ordinal,
    },
    Asexual(EventLine),
    Nondeterministic(EventLine),
    MultiParent(EventLine),
    Sterile {
        agent_id: u64,
        chain_length: u64,
    },
    MaxEvents {
        event_count: u64,
    },
    Overflow {
        event_index: u64,
        message: String,
    },
}

impl From<&LineageEvent> for Line {
    fn from(e: &LineageEvent) -> Self {
        let body = EventLine {
            child_id: e.child_id,
            parent_ids: e.parent_ids.clone(),
            child_intelligence: e.child_intelligence.clone(),
            seed_used: e.seed_used,
            event_index: e.event_index,
        };
        match e.kind {
            EventKind::Asexual => Line::Asexual(body),
            EventKind::Nondeterministic => Line::Nondeterministic(body),
            EventKind::MultiParent => Line::MultiParent(body),
        }
    }
}

/// One JSON object per line, each line newline-terminated.
pub fn write_jsonl(log: &EventLog) -> String {
    let mut lines: Vec<Line> = log
        .founders
        .iter()
        .map(|a| Line::Founder {
            child_id: a.id,
            child_intelligence: a.intelligence.clone(),
        })
        .collect();
    lines.extend(log.events.iter().map(Line::from));
    lines.push(match &log.termination {
        Termination::Sterile {
            agent_id,
            chain_length,
        } => Line::Sterile {
            agent_id: *agent_id,
            chain_length: *chain_length,
        },
        Termination::MaxEvents { event_count } => Line::MaxEvents {
            event_count: *event_count,
        },
        Termination::Overflow {
            event_index,
            message,
        } => Line::Overflow {
            event_index: *event_index,
            message: message.clone(),
        },
    });
    let mut out = String::new();
    for line in &lines {
        out.push_str(&serde_json::to_string(line).expect("log lines serialize"));
        out.push('\n');
    }
    out
}

pub fn read_jsonl(text: &str) -> Result<EventLog, LogError> {
    let mut founders = Vec::new();
    let mut events = Vec::new();
    let mut termination = None;
    for (i, raw) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let line_no = i + 1;
        if termination.is_some() {
            return Err(LogError::Structure {
                line: line_no,
                message: "content after the termination line".into(),
            });
        }
        let line: Line = serde_json::from_str(raw).map_err(|source| LogError::Json {
            line: line_no,
            source,
        })?;
        let (kind, body) = match line {
            Line::Founder {
                child_id,
                child_intelligence,
            } => {
                founders.push(Agent::founder(child_id, child_intelligence));
                continue;
            }
            Line::Asexual(b) => (EventKind::Asexual, b),
            Line::Nondeterministic(b) => (EventKind::Nondeterministic, b),
            Line::MultiParent(b) => (EventKind::MultiParent, b),
            Line::Sterile {
                agent_id,
                chain_length,
            } => {
                termination = Some(Termination::Sterile {
                    agent_id,
                    chain_length,
                });
                continue;
            }
            Line::MaxEvents { event_count } => {
                termination = Some(Termination::MaxEvents { event_count });
                continue;
            }
            Line::Overflow {
                event_index,
                message,
            } => {
                termination = Some(Termination::Overflow {
                    event_index,
                    message,
                });
                continue;
            }
        };
        events.push(LineageEvent {
            kind,
            child_id: body.child_id,
            parent_ids: body.parent_ids,
            child_intelligence: body.child_intelligence,
            seed_used: body.seed_used,
            event_index: body.event_index,
        });
    }
    let termination = termination.ok_or(LogError::Structure {
        line: text.lines().count(),
        message: "missing termination line".into(),
    })?;
    Ok(EventLog {
        founders,
        events,
        termination,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainStats {
    /// Most single-parent creations in a row along any ancestry chain.
    pub max_asexual_run_length: u64,
    pub total_agents: u64,
    pub multi_parent_count: u64,
    /// `(eventIndex, childIntelligence)` in surface syntax.
    pub intelligence_time_series: Vec<(u64, String)>,
}

pub fn chain_stats(log: &EventLog) -> ChainStats {
    let mut run: HashMap<u64, u64> = log.founders.iter().map(|a| (a.id, 0)).collect();
    let mut stats = ChainStats {
        total_agents: (log.founders.len() + log.events.len()) as u64,
        ..ChainStats::default()
    };
    for e in &log.events {
        let r = match (e.kind, &e.parent_ids[..]) {
            (EventKind::MultiParent, _) => {
                stats.multi_parent_count += 1;
                0
            }
            (_, [p]) => run.get(p).copied().unwrap_or(0) + 1,
            _ => 0,
        };
        run.insert(e.child_id, r);
        stats.max_asexual_run_length = stats.max_asexual_run_length.max(r);
        stats
            .intelligence_time_series
            .push((e.event_index, e.child_intelligence.to_string()));
    }
    stats
}
