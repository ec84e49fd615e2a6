//! Safeness and soundness checking over explored state graphs.
//!
//! Verdicts are three-valued. A violation is only reported once the
//! abstract path leading to it has been replayed with exact counters; a
//! `Holds` for soundness only when every explored state is certain to
//! reach a good state however capped counts are resolved.

mod classify;
mod explore;
mod theorems;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Collaboration, Process};
use crate::semantics::{Configuration, Net, Trace};

pub use classify::{assess, classify, Assessment, ClassificationReport, CollabVerdicts, PoolVerdicts};
pub use explore::{explore, Lts, LtsArc};
pub use theorems::{check_theorems, Claim, ClaimKind, TheoremCheckResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExplorationBounds {
    pub edge_cap: u32,
    pub msg_cap: u32,
    pub state_cap: usize,
}

impl Default for ExplorationBounds {
    fn default() -> Self {
        ExplorationBounds { edge_cap: 3, msg_cap: 3, state_cap: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("state limit of {0} exceeded")]
    StateCapExceeded(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    Holds,
    Violated,
    Inconclusive,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Value::Holds => "holds",
            Value::Violated => "violated",
            Value::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub value: Value,
    pub witness: Option<Trace>,
    /// Some counter relevant to the property hit its cap.
    pub saturated: bool,
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds(saturated: bool) -> Self {
        Verdict { value: Value::Holds, witness: None, saturated, note: None }
    }

    pub fn violated(witness: Trace, saturated: bool) -> Self {
        Verdict { value: Value::Violated, witness: Some(witness), saturated, note: None }
    }

    pub fn inconclusive(saturated: bool, note: impl Into<String>) -> Self {
        Verdict { value: Value::Inconclusive, witness: None, saturated, note: Some(note.into()) }
    }

    /// Structural verdicts carry no trace.
    pub fn from_bool(b: bool) -> Self {
        Verdict {
            value: if b { Value::Holds } else { Value::Violated },
            witness: None,
            saturated: false,
            note: None,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.value == Value::Holds
    }

    pub fn is_violated(&self) -> bool {
        self.value == Value::Violated
    }
}

/// Limit on abstract candidates replayed before giving up on a witness.
const REPLAY_LIMIT: usize = 10_000;

/// Safeness over an explored graph: no sequence edge ever holds two tokens.
pub fn safeness(net: &Net, lts: &Lts) -> Verdict {
    let unsafe_states: Vec<usize> =
        (0..lts.len()).filter(|&s| net.max_marking_all(&lts.states[s]) >= 2).collect();
    if unsafe_states.is_empty() {
        return Verdict::holds(false);
    }
    for &s in unsafe_states.iter().take(REPLAY_LIMIT) {
        if let Some((trace, c)) = lts.replay(net, s) {
            if net.max_marking_all(&c) >= 2 {
                return Verdict::violated(trace, lts.sigma_saturated);
            }
        }
    }
    Verdict::inconclusive(lts.sigma_saturated, "unsafe states found only in the capped abstraction")
}

/// Soundness-style check: from every reachable state a `good` state must
/// stay reachable.
pub fn eventually_good(net: &Net, lts: &Lts, good: impl Fn(&Configuration) -> bool) -> Verdict {
    let target: Vec<bool> = lts.states.iter().map(&good).collect();
    let saturated = lts.saturated();
    let must = lts.must_attractor(&target);
    if must.iter().all(|&b| b) {
        return Verdict::holds(saturated);
    }
    let may = lts.backward_reachable(&target);
    let bounds = lts.bounds;
    for s in (0..lts.len()).filter(|&s| !may[s]).take(REPLAY_LIMIT) {
        if let Some((trace, c)) = lts.replay(net, s) {
            let a = bounds.abstraction(&c);
            if let Some(i) = lts.states.get_index_of(&a) {
                if !may[i] {
                    return Verdict::violated(extend_to_stuck(net, trace, c), saturated);
                }
            }
        }
    }
    Verdict::inconclusive(saturated, "capped counters hide whether completion stays reachable")
}

/// Continues a trace from a state that cannot complete until it gets
/// stuck or revisits a state, so the witness shows where the run ends up.
/// Appends a run to a stuck configuration when one is reached within
/// `EXTENSION_LIMIT` first-choice steps; otherwise keeps `trace` as is.
fn extend_to_stuck(net: &Net, mut trace: Trace, mut c: Configuration) -> Trace {
    let mut tail = Vec::new();
    let mut seen = std::collections::HashSet::new();
    seen.insert(c.clone());
    for _ in 0..EXTENSION_LIMIT {
        let Some(step) = net.steps(&c).into_iter().next() else {
            trace.steps.extend(tail);
            return trace;
        };
        tail.push(net.trace_step(step.rule));
        c = step.target;
        if !seen.insert(c.clone()) {
            break;
        }
    }
    trace
}

const EXTENSION_LIMIT: usize = 64;

fn explored(net: &Net, bounds: &ExplorationBounds, f: impl FnOnce(&Lts) -> Verdict) -> Verdict {
    match explore(net, bounds) {
        Ok(lts) => f(&lts),
        Err(e) => Verdict::inconclusive(false, e.to_string()),
    }
}

pub fn is_cs_safe(net: &Net, pool: usize, c: &Configuration) -> bool {
    net.is_cs_safe(pool, c)
}

pub fn is_cs_sound(net: &Net, pool: usize, c: &Configuration) -> bool {
    net.is_cs_sound(pool, c)
}

/// Every pool cs-sound and, if `empty_queues`, no pending message.
pub fn collaboration_good(net: &Net, c: &Configuration, empty_queues: bool) -> bool {
    (0..net.pools.len()).all(|p| net.is_cs_sound(p, c)) && (!empty_queues || c.delta.iter().all(|&v| v == 0))
}

pub fn is_safe_process(name: &str, p: &Process, bounds: &ExplorationBounds) -> Verdict {
    let net = Net::process(name, p);
    explored(&net, bounds, |lts| safeness(&net, lts))
}

pub fn is_sound_process(name: &str, p: &Process, bounds: &ExplorationBounds) -> Verdict {
    let net = Net::process(name, p);
    explored(&net, bounds, |lts| eventually_good(&net, lts, |c| net.is_cs_sound(0, c)))
}

/// Message counters are ignored: only sequence edges count.
pub fn is_safe_collaboration(model: &Collaboration, bounds: &ExplorationBounds) -> Verdict {
    let net = Net::collaboration(model);
    explored(&net, bounds, |lts| safeness(&net, lts))
}

pub fn is_sound_collaboration(model: &Collaboration, bounds: &ExplorationBounds) -> Verdict {
    let net = Net::collaboration(model);
    explored(&net, bounds, |lts| eventually_good(&net, lts, |c| collaboration_good(&net, c, true)))
}

pub fn is_mr_sound_collaboration(model: &Collaboration, bounds: &ExplorationBounds) -> Verdict {
    let net = Net::collaboration(model);
    explored(&net, bounds, |lts| eventually_good(&net, lts, |c| collaboration_good(&net, c, false)))
}

#[cfg(test)]
mod tests;
