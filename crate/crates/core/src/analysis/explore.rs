//! Breadth-first exploration with capped counters.
//!
//! Counts `0..=cap` are exact; `cap + 1` stands for "more than cap". An
//! increment past the cap lands on that value, a decrement from it may
//! land on either `cap + 1` or `cap`. Guards stay exact: a marked test
//! holds on the capped value and an empty test fails on it. Without
//! saturation the result is the exact state graph.

use std::collections::VecDeque;
use std::fmt::Write;

use indexmap::IndexSet;

use super::{AnalysisError, ExplorationBounds};
use crate::semantics::{Configuration, Label, Net, Trace};

/// A transition of the explored graph. Arcs produced by the same rule
/// firing share a `group`; they differ only in how a capped count was
/// decremented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LtsArc {
    pub source: usize,
    pub target: usize,
    pub rule: usize,
    pub group: usize,
}

#[derive(Debug, Clone)]
pub struct Lts {
    pub states: IndexSet<Configuration>,
    /// Arcs sorted by source; `first_arc[s]..first_arc[s + 1]` are those of `s`.
    pub arcs: Vec<LtsArc>,
    pub first_arc: Vec<usize>,
    /// Arc through which each state was first reached.
    pub parent: Vec<Option<usize>>,
    /// States where some increment hit its cap.
    pub truncated: Vec<bool>,
    pub sigma_saturated: bool,
    pub delta_saturated: bool,
    pub bounds: ExplorationBounds,
}

impl ExplorationBounds {
    pub fn sigma_top(&self) -> u32 {
        self.edge_cap + 1
    }

    pub fn delta_top(&self) -> u32 {
        self.msg_cap + 1
    }

    /// Abstraction of an exact configuration.
    pub fn abstraction(&self, c: &Configuration) -> Configuration {
        Configuration {
            sigma: c.sigma.iter().map(|&v| v.min(self.sigma_top())).collect(),
            delta: c.delta.iter().map(|&v| v.min(self.delta_top())).collect(),
        }
    }
}

fn decrement(values: &mut Vec<Configuration>, top: u32, pick: impl Fn(&mut Configuration) -> &mut u32) {
    let mut extra = Vec::new();
    for c in values.iter_mut() {
        let v = pick(c);
        if *v == top {
            let mut lower = c.clone();
            *pick(&mut lower) = top - 1;
            extra.push(lower);
        } else {
            *v -= 1;
        }
    }
    values.extend(extra);
}

/// Successors of firing `rule` in abstract state `c`, plus whether a
/// sequence or message counter saturated.
pub(crate) fn fire_abstract(
    net: &Net,
    rule: usize,
    c: &Configuration,
    b: &ExplorationBounds,
) -> Option<(Vec<Configuration>, bool, bool)> {
    let r = &net.rules[rule];
    if !net.enabled(r, c) {
        return None;
    }
    let (st, dt) = (b.sigma_top(), b.delta_top());
    let mut out = vec![c.clone()];
    for &e in &r.consume {
        decrement(&mut out, st, |c| &mut c.sigma[e]);
    }
    let (mut sat_s, mut sat_d) = (false, false);
    for c in out.iter_mut() {
        for &e in &r.reset {
            c.sigma[e] = 0;
        }
        for &e in &r.produce {
            if c.sigma[e] >= b.edge_cap {
                c.sigma[e] = st;
                sat_s = true;
            } else {
                c.sigma[e] += 1;
            }
        }
    }
    if net.collaborative {
        if let Some(m) = r.message {
            match r.label {
                Label::Send(_) => {
                    for c in out.iter_mut() {
                        if c.delta[m] >= b.msg_cap {
                            c.delta[m] = dt;
                            sat_d = true;
                        } else {
                            c.delta[m] += 1;
                        }
                    }
                }
                Label::Receive(_) => decrement(&mut out, dt, |c| &mut c.delta[m]),
                _ => {}
            }
        }
    }
    out.sort();
    out.dedup();
    Some((out, sat_s, sat_d))
}

/// Explores the state graph of `net` from its initial configuration.
pub fn explore(net: &Net, bounds: &ExplorationBounds) -> Result<Lts, AnalysisError> {
    let mut states = IndexSet::new();
    states.insert(net.initial());
    let mut lts = Lts {
        states: IndexSet::new(),
        arcs: Vec::new(),
        first_arc: vec![0],
        parent: vec![None],
        truncated: Vec::new(),
        sigma_saturated: false,
        delta_saturated: false,
        bounds: *bounds,
    };
    let mut group = 0;
    let mut s = 0;
    while s < states.len() {
        let c = states[s].clone();
        let mut truncated = false;
        for rule in 0..net.rules.len() {
            let Some((targets, sat_s, sat_d)) = fire_abstract(net, rule, &c, bounds) else {
                continue;
            };
            truncated |= sat_s || sat_d;
            lts.sigma_saturated |= sat_s;
            lts.delta_saturated |= sat_d;
            for t in targets {
                let (target, fresh) = states.insert_full(t);
                if fresh {
                    if states.len() > bounds.state_cap {
                        return Err(AnalysisError::StateCapExceeded(bounds.state_cap));
                    }
                    lts.parent.push(Some(lts.arcs.len()));
                }
                lts.arcs.push(LtsArc { source: s, target, rule, group });
            }
            group += 1;
        }
        lts.truncated.push(truncated);
        lts.first_arc.push(lts.arcs.len());
        s += 1;
    }
    lts.states = states;
    Ok(lts)
}

impl Lts {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn saturated(&self) -> bool {
        self.sigma_saturated || self.delta_saturated
    }

    pub fn arcs_of(&self, s: usize) -> &[LtsArc] {
        &self.arcs[self.first_arc[s]..self.first_arc[s + 1]]
    }

    /// Rules along the breadth-first tree path from the initial state.
    pub fn path_to(&self, mut s: usize) -> Vec<usize> {
        let mut rules = Vec::new();
        while let Some(a) = self.parent[s] {
            rules.push(self.arcs[a].rule);
            s = self.arcs[a].source;
        }
        rules.reverse();
        rules
    }

    /// Re-executes the path to `s` with exact counters. Fails if a step of
    /// the abstract path is not possible concretely.
    pub fn replay(&self, net: &Net, s: usize) -> Option<(Trace, Configuration)> {
        let mut c = net.initial();
        let mut trace = Trace::default();
        for rule in self.path_to(s) {
            c = net.fire(rule, &c)?;
            trace.steps.push(net.trace_step(rule));
        }
        Some((trace, c))
    }

    /// States from which some state satisfying `target` is reachable.
    pub fn backward_reachable(&self, target: &[bool]) -> Vec<bool> {
        let n = self.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.arcs {
            preds[a.target].push(a.source);
        }
        let mut seen = target.to_vec();
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| seen[s]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &preds[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// States that reach a `target` state whichever way capped counts are
    /// resolved: least set closed under "good, or some rule firing has all
    /// its outcomes inside".
    pub fn must_attractor(&self, target: &[bool]) -> Vec<bool> {
        let n = self.len();
        let mut inside = target.to_vec();
        // Outstanding targets per group, and arcs entering each state.
        let mut pending: Vec<usize> = Vec::new();
        let mut group_source: Vec<usize> = Vec::new();
        let mut entering: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.arcs {
            if a.group >= pending.len() {
                pending.resize(a.group + 1, 0);
                group_source.resize(a.group + 1, 0);
            }
            pending[a.group] += 1;
            group_source[a.group] = a.source;
            entering[a.target].push(a.group);
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| inside[s]).collect();
        while let Some(s) = queue.pop_front() {
            for &g in &entering[s] {
                pending[g] -= 1;
                let src = group_source[g];
                if pending[g] == 0 && !inside[src] {
                    inside[src] = true;
                    queue.push_back(src);
                }
            }
        }
        inside
    }

    /// DOT rendering; states satisfying `accepting` are double circles.
    pub fn to_dot(&self, net: &Net, accepting: impl Fn(&Configuration) -> bool) -> String {
        let mut s = String::from("digraph lts {\n  node [shape=circle];\n");
        for (i, c) in self.states.iter().enumerate() {
            let shape = if accepting(c) { "doublecircle" } else { "circle" };
            let style = if self.truncated[i] { ", style=dashed" } else { "" };
            let _ = writeln!(s, "  s{i} [shape={shape}{style}, tooltip=\"{}\"];", net.describe(c));
        }
        let _ = writeln!(s, "  init [shape=point];\n  init -> s0;");
        for a in &self.arcs {
            let label = net.rules[a.rule].label.lift();
            let _ = writeln!(s, "  s{} -> s{} [label=\"{label}\"];", a.source, a.target);
        }
        s.push_str("}\n");
        s
    }
}
