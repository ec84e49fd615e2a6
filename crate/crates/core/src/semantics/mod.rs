//! Token-game semantics.
//!
//! A model is compiled once into a [`Net`]: every edge and message gets a
//! dense index and every element is turned into one or more [`Rule`]s.
//! A rule is a guarded counter update, so the same rule set drives exact
//! execution here and the bounded exploration in `analysis`.

mod trace;

use std::collections::BTreeMap;
use std::fmt;

use crate::model::{Collaboration, EdgeId, Element, ElementPath, Pool, Process};

pub use trace::{Trace, TraceStep};

/// Process-level transition label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Epsilon,
    Kill,
    Send(String),
    Receive(String),
}

impl Label {
    /// Collaboration-level view of the label.
    pub fn lift(&self) -> CollabLabel {
        match self {
            Label::Epsilon | Label::Kill => CollabLabel::Tau,
            Label::Send(m) => CollabLabel::Send(m.clone()),
            Label::Receive(m) => CollabLabel::Receive(m.clone()),
        }
    }

    /// Label text used in traces; `kill` is kept visible.
    pub fn trace_text(&self) -> String {
        match self {
            Label::Epsilon => "tau".into(),
            Label::Kill => "kill".into(),
            Label::Send(m) => format!("!{m}"),
            Label::Receive(m) => format!("?{m}"),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Epsilon => f.write_str("ε"),
            Label::Kill => f.write_str("kill"),
            Label::Send(m) => write!(f, "!{m}"),
            Label::Receive(m) => write!(f, "?{m}"),
        }
    }
}

/// Collaboration-level transition label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CollabLabel {
    Tau,
    Send(String),
    Receive(String),
}

impl fmt::Display for CollabLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollabLabel::Tau => f.write_str("tau"),
            CollabLabel::Send(m) => write!(f, "!{m}"),
            CollabLabel::Receive(m) => write!(f, "?{m}"),
        }
    }
}

/// Edge marking σ and message marking δ, both indexed densely by the
/// owning [`Net`]. At process level δ is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub sigma: Vec<u32>,
    pub delta: Vec<u32>,
}

/// One firing mode of an element.
///
/// Firing checks the guards (`consume` and `require_any` need a token,
/// `require_zero` needs none), then decrements `consume`, clears `reset`
/// and increments `produce`, in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub pool: usize,
    pub path: ElementPath,
    pub label: Label,
    pub consume: Vec<usize>,
    pub require_zero: Vec<usize>,
    pub require_any: Vec<usize>,
    pub reset: Vec<usize>,
    pub produce: Vec<usize>,
    /// Message index touched at collaboration level.
    pub message: Option<usize>,
}

impl Rule {
    fn new(pool: usize, path: ElementPath, label: Label) -> Self {
        Rule {
            pool,
            path,
            label,
            consume: Vec::new(),
            require_zero: Vec::new(),
            require_any: Vec::new(),
            reset: Vec::new(),
            produce: Vec::new(),
            message: None,
        }
    }

    fn is_send(&self) -> bool {
        matches!(self.label, Label::Send(_))
    }

    fn is_receive(&self) -> bool {
        matches!(self.label, Label::Receive(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolInfo {
    pub name: String,
    /// Enabling edge of the top-level start event.
    pub enabling: usize,
    /// Every edge of the pool, nested scopes included.
    pub edges: Vec<usize>,
    /// Completing edges of the top scope.
    pub completing: Vec<usize>,
}

/// Result of firing one rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: usize,
    pub target: Configuration,
}

/// Compiled form of a collaboration, or of one process in isolation.
#[derive(Debug, Clone)]
pub struct Net {
    pub edges: Vec<EdgeId>,
    pub edge_pool: Vec<usize>,
    pub messages: Vec<String>,
    pub pools: Vec<PoolInfo>,
    pub rules: Vec<Rule>,
    /// Whether receives are guarded by δ. False for a process on its own.
    pub collaborative: bool,
}

struct Builder<'a> {
    edge_index: &'a BTreeMap<String, usize>,
    message_index: &'a BTreeMap<String, usize>,
    pool: usize,
    rules: Vec<Rule>,
}

impl Builder<'_> {
    fn e(&self, name: &str) -> usize {
        self.edge_index[name]
    }

    fn msg(&self, name: &str) -> Option<usize> {
        self.message_index.get(name).copied()
    }

    fn scope_edges(&self, p: &Process) -> Vec<usize> {
        p.edges().iter().map(|id| self.e(&id.name)).collect()
    }

    fn simple(&mut self, path: &ElementPath, label: Label, input: &str, out: &str) {
        let mut r = Rule::new(self.pool, path.clone(), label);
        r.message = match &r.label {
            Label::Send(m) | Label::Receive(m) => self.msg(m),
            _ => None,
        };
        r.consume.push(self.e(input));
        r.produce.push(self.e(out));
        self.rules.push(r);
    }

    /// `scope` holds the edges a terminate in this scope clears; `exit`
    /// is the edge it continues on, if inside a sub-process.
    fn process(&mut self, p: &Process, path: &ElementPath, scope: &[usize], exit: Option<usize>) {
        for (i, el) in p.elements.iter().enumerate() {
            let here = path.child(i, el.kind_name());
            match el {
                Element::Start { enb, out } => self.simple(&here, Label::Epsilon, enb, out),
                Element::StartMsg { enb, msg, out } => {
                    self.simple(&here, Label::Receive(msg.clone()), enb, out)
                }
                Element::End { input, cmp } => self.simple(&here, Label::Epsilon, input, cmp),
                Element::EndMsg { input, msg, cmp } => {
                    self.simple(&here, Label::Send(msg.clone()), input, cmp)
                }
                Element::Task { input, out } | Element::EmptyTask { input, out } => {
                    self.simple(&here, Label::Epsilon, input, out)
                }
                Element::ReceiveTask { input, msg, out } | Element::CatchEvent { input, msg, out } => {
                    self.simple(&here, Label::Receive(msg.clone()), input, out)
                }
                Element::SendTask { input, msg, out } | Element::ThrowEvent { input, msg, out } => {
                    self.simple(&here, Label::Send(msg.clone()), input, out)
                }
                Element::Terminate { input } => {
                    let mut r = Rule::new(self.pool, here, Label::Kill);
                    r.consume.push(self.e(input));
                    r.reset = scope.to_vec();
                    r.produce.extend(exit);
                    self.rules.push(r);
                }
                Element::EventBased { input, branches } => {
                    for b in branches {
                        self.simple(&here, Label::Receive(b.msg.clone()), input, &b.out);
                    }
                }
                Element::AndSplit { input, outs } => {
                    let mut r = Rule::new(self.pool, here, Label::Epsilon);
                    r.consume.push(self.e(input));
                    r.produce = outs.iter().map(|o| self.e(o)).collect();
                    self.rules.push(r);
                }
                Element::XorSplit { input, outs } => {
                    for o in outs {
                        self.simple(&here, Label::Epsilon, input, o);
                    }
                }
                Element::AndJoin { ins, out } => {
                    let mut r = Rule::new(self.pool, here, Label::Epsilon);
                    r.consume = ins.iter().map(|x| self.e(x)).collect();
                    r.produce.push(self.e(out));
                    self.rules.push(r);
                }
                Element::XorJoin { ins, out } => {
                    for x in ins {
                        self.simple(&here, Label::Epsilon, x, out);
                    }
                }
                Element::SubProcess { input, body, out } => {
                    let body_edges = self.scope_edges(body);
                    let completing: Vec<usize> =
                        body.completing_edges().iter().map(|c| self.e(&c.name)).collect();
                    if let Some(enb) = body.start_enabling_edge() {
                        self.simple(&here, Label::Epsilon, input, enb);
                    }
                    let mut done = Rule::new(self.pool, here.clone(), Label::Epsilon);
                    done.require_zero =
                        body_edges.iter().copied().filter(|e| !completing.contains(e)).collect();
                    done.require_any = completing.clone();
                    done.reset = completing;
                    done.produce.push(self.e(out));
                    self.rules.push(done);
                    self.process(body, &here, &body_edges, Some(self.e(out)));
                }
            }
        }
    }
}

impl Net {
    /// Compiles a whole collaboration; receives are guarded by δ.
    pub fn collaboration(model: &Collaboration) -> Net {
        Self::build(&model.pools, true)
    }

    /// Compiles one process on its own; receives are always enabled.
    pub fn process(name: &str, process: &Process) -> Net {
        Self::build(&[Pool::new(name, process.clone())], false)
    }

    fn build(pools: &[Pool], collaborative: bool) -> Net {
        let mut edges = Vec::new();
        let mut edge_pool = Vec::new();
        let mut edge_index = BTreeMap::new();
        for (pi, pool) in pools.iter().enumerate() {
            for id in pool.process.edges() {
                edge_index.insert(id.name.clone(), edges.len());
                edges.push(id);
                edge_pool.push(pi);
            }
        }
        let messages: Vec<String> = if collaborative {
            Collaboration::new(pools.to_vec()).messages().into_iter().collect()
        } else {
            Vec::new()
        };
        let message_index: BTreeMap<String, usize> =
            messages.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();

        let mut infos = Vec::new();
        let mut rules = Vec::new();
        for (pi, pool) in pools.iter().enumerate() {
            let mut b = Builder { edge_index: &edge_index, message_index: &message_index, pool: pi, rules: Vec::new() };
            let all = b.scope_edges(&pool.process);
            b.process(&pool.process, &ElementPath::root(), &all, None);
            rules.append(&mut b.rules);
            infos.push(PoolInfo {
                name: pool.name.clone(),
                enabling: pool.process.start_enabling_edge().map(|e| edge_index[e]).unwrap_or(0),
                edges: all,
                completing: pool
                    .process
                    .completing_edges()
                    .iter()
                    .map(|c| edge_index[&c.name])
                    .collect(),
            });
        }
        Net { edges, edge_pool, messages, pools: infos, rules, collaborative }
    }

    pub fn edge(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn message(&self, name: &str) -> Option<usize> {
        self.messages.iter().position(|m| m == name)
    }

    /// All-zero configuration.
    pub fn zero(&self) -> Configuration {
        Configuration { sigma: vec![0; self.edges.len()], delta: vec![0; self.messages.len()] }
    }

    /// One token on each pool's start enabling edge, everything else empty.
    pub fn initial(&self) -> Configuration {
        let mut c = self.zero();
        for p in &self.pools {
            c.sigma[p.enabling] = 1;
        }
        c
    }

    pub fn is_init(&self, c: &Configuration) -> bool {
        *c == self.initial()
    }

    /// Whether `rule` may fire in `c`.
    pub fn enabled(&self, rule: &Rule, c: &Configuration) -> bool {
        rule.consume.iter().all(|&e| c.sigma[e] > 0)
            && rule.require_zero.iter().all(|&e| c.sigma[e] == 0)
            && (rule.require_any.is_empty() || rule.require_any.iter().any(|&e| c.sigma[e] > 0))
            && !(self.collaborative
                && rule.is_receive()
                && rule.message.is_none_or(|m| c.delta[m] == 0))
    }

    /// Fires `rule` with exact counters, or `None` if it is not enabled.
    pub fn fire(&self, rule: usize, c: &Configuration) -> Option<Configuration> {
        let r = &self.rules[rule];
        if !self.enabled(r, c) {
            return None;
        }
        let mut next = c.clone();
        for &e in &r.consume {
            next.sigma[e] -= 1;
        }
        for &e in &r.reset {
            next.sigma[e] = 0;
        }
        for &e in &r.produce {
            next.sigma[e] += 1;
        }
        if self.collaborative {
            if let Some(m) = r.message {
                if r.is_send() {
                    next.delta[m] += 1;
                } else if r.is_receive() {
                    next.delta[m] -= 1;
                }
            }
        }
        Some(next)
    }

    /// Every enabled step, in rule order.
    pub fn steps(&self, c: &Configuration) -> Vec<Step> {
        (0..self.rules.len())
            .filter_map(|i| self.fire(i, c).map(|target| Step { rule: i, target }))
            .collect()
    }

    /// Process-level label of a step.
    pub fn label(&self, step: &Step) -> &Label {
        &self.rules[step.rule].label
    }

    /// No token anywhere in the pool except on its top-scope completing
    /// edges.
    pub fn is_zero_except_completing(&self, pool: usize, c: &Configuration) -> bool {
        let p = &self.pools[pool];
        p.edges.iter().all(|&e| p.completing.contains(&e) || c.sigma[e] == 0)
    }

    /// Largest token count over the pool's edges, nested scopes included.
    pub fn max_marking(&self, pool: usize, c: &Configuration) -> u32 {
        self.pools[pool].edges.iter().map(|&e| c.sigma[e]).max().unwrap_or(0)
    }

    /// Largest token count over every sequence edge of the net.
    pub fn max_marking_all(&self, c: &Configuration) -> u32 {
        c.sigma.iter().copied().max().unwrap_or(0)
    }

    /// Pool is either cleared, or finished with one token on each marked
    /// completing edge and nothing elsewhere.
    pub fn is_cs_sound(&self, pool: usize, c: &Configuration) -> bool {
        self.is_zero_except_completing(pool, c)
            && self.pools[pool].completing.iter().all(|&e| c.sigma[e] <= 1)
    }

    pub fn is_cs_safe(&self, pool: usize, c: &Configuration) -> bool {
        self.max_marking(pool, c) <= 1
    }

    /// Trace step describing the firing of `rule`.
    pub fn trace_step(&self, rule: usize) -> TraceStep {
        let r = &self.rules[rule];
        TraceStep {
            label: r.label.trace_text(),
            pool: self.pools[r.pool].name.clone(),
            path: r.path.to_string(),
        }
    }

    /// Readable rendering of a configuration: marked edges and messages.
    pub fn describe(&self, c: &Configuration) -> String {
        let mut parts: Vec<String> = c
            .sigma
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(i, v)| format!("{}={v}", self.edges[i].name))
            .collect();
        parts.extend(
            c.delta
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0)
                .map(|(i, v)| format!("#{}={v}", self.messages[i])),
        );
        if parts.is_empty() {
            "∅".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Initial configuration of a collaboration.
pub fn initial_configuration(model: &Collaboration) -> Configuration {
    Net::collaboration(model).initial()
}

/// Named view of a configuration, for tests and tooling.
pub fn marking(net: &Net, c: &Configuration) -> BTreeMap<String, u32> {
    net.edges.iter().zip(&c.sigma).map(|(e, &v)| (e.name.clone(), v)).collect()
}
