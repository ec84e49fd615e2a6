//! Naive reference interpreter working directly on the AST.
//!
//! Markings are sparse name-keyed maps. Exploration is exact and gives up
//! past a state budget.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use bpmnc::model::{Collaboration, Element, Pool, Process};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub sigma: BTreeMap<String, u64>,
    pub delta: BTreeMap<String, u64>,
}

fn inc(m: &mut BTreeMap<String, u64>, k: &str) {
    *m.entry(k.to_string()).or_insert(0) += 1;
}

fn dec(m: &mut BTreeMap<String, u64>, k: &str) {
    let v = m.get_mut(k).expect("decrement of an empty counter");
    *v -= 1;
    if *v == 0 {
        m.remove(k);
    }
}

fn get(m: &BTreeMap<String, u64>, k: &str) -> u64 {
    m.get(k).copied().unwrap_or(0)
}

/// Every sequence edge mentioned in `p`, nested bodies included.
pub fn edges_of(p: &Process) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for el in &p.elements {
        let names: Vec<&String> = match el {
            Element::Start { enb, out } => vec![enb, out],
            Element::End { input, cmp } => vec![input, cmp],
            Element::StartMsg { enb, out, .. } => vec![enb, out],
            Element::EndMsg { input, cmp, .. } => vec![input, cmp],
            Element::Terminate { input } => vec![input],
            Element::EventBased { input, branches } => {
                let mut v = vec![input];
                v.extend(branches.iter().map(|b| &b.out));
                v
            }
            Element::AndSplit { input, outs } | Element::XorSplit { input, outs } => {
                let mut v = vec![input];
                v.extend(outs);
                v
            }
            Element::AndJoin { ins, out } | Element::XorJoin { ins, out } => {
                let mut v: Vec<&String> = ins.iter().collect();
                v.push(out);
                v
            }
            Element::Task { input, out }
            | Element::EmptyTask { input, out }
            | Element::ReceiveTask { input, out, .. }
            | Element::SendTask { input, out, .. }
            | Element::CatchEvent { input, out, .. }
            | Element::ThrowEvent { input, out, .. } => vec![input, out],
            Element::SubProcess { input, out, .. } => vec![input, out],
        };
        out.extend(names.into_iter().cloned());
        if let Element::SubProcess { body, .. } = el {
            out.extend(edges_of(body));
        }
    }
    out
}

/// Completing edges of this scope only.
pub fn completing_of(p: &Process) -> BTreeSet<String> {
    p.elements
        .iter()
        .filter_map(|el| match el {
            Element::End { cmp, .. } | Element::EndMsg { cmp, .. } => Some(cmp.clone()),
            _ => None,
        })
        .collect()
}

fn enabling_of(p: &Process) -> Option<String> {
    p.elements.iter().find_map(|el| match el {
        Element::Start { enb, .. } | Element::StartMsg { enb, .. } => Some(enb.clone()),
        _ => None,
    })
}

/// One oracle step: label text, pool name, successor.
pub type OStep = (String, String, State);

struct Walker<'a> {
    s: &'a State,
    collaborative: bool,
    pool: &'a str,
    out: Vec<OStep>,
}

impl Walker<'_> {
    fn push(&mut self, label: String, next: State) {
        self.out.push((label, self.pool.to_string(), next));
    }

    fn move_token(&mut self, from: &[&str], to: &[&str], label: String) {
        if from.iter().any(|e| get(&self.s.sigma, e) == 0) {
            return;
        }
        let mut n = self.s.clone();
        for e in from {
            dec(&mut n.sigma, e);
        }
        for e in to {
            inc(&mut n.sigma, e);
        }
        self.push(label, n);
    }

    fn receive(&mut self, input: &str, msg: &str, out: &str) {
        if get(&self.s.sigma, input) == 0 {
            return;
        }
        let mut n = self.s.clone();
        if self.collaborative {
            if get(&n.delta, msg) == 0 {
                return;
            }
            dec(&mut n.delta, msg);
        }
        dec(&mut n.sigma, input);
        inc(&mut n.sigma, out);
        self.push(format!("?{msg}"), n);
    }

    fn send(&mut self, input: &str, msg: &str, out: &str) {
        if get(&self.s.sigma, input) == 0 {
            return;
        }
        let mut n = self.s.clone();
        if self.collaborative {
            inc(&mut n.delta, msg);
        }
        dec(&mut n.sigma, input);
        inc(&mut n.sigma, out);
        self.push(format!("!{msg}"), n);
    }

    fn scope(&mut self, p: &Process, clear: &BTreeSet<String>, exit: Option<&str>) {
        let tau = || "tau".to_string();
        for el in &p.elements {
            match el {
                Element::Start { enb, out } => self.move_token(&[enb], &[out], tau()),
                Element::End { input, cmp } => self.move_token(&[input], &[cmp], tau()),
                Element::StartMsg { enb, msg, out } => self.receive(enb, msg, out),
                Element::EndMsg { input, msg, cmp } => self.send(input, msg, cmp),
                Element::Task { input, out } | Element::EmptyTask { input, out } => {
                    self.move_token(&[input], &[out], tau())
                }
                Element::ReceiveTask { input, msg, out } | Element::CatchEvent { input, msg, out } => {
                    self.receive(input, msg, out)
                }
                Element::SendTask { input, msg, out } | Element::ThrowEvent { input, msg, out } => {
                    self.send(input, msg, out)
                }
                Element::Terminate { input } => {
                    if get(&self.s.sigma, input) > 0 {
                        let mut n = self.s.clone();
                        n.sigma.retain(|k, _| !clear.contains(k));
                        if let Some(x) = exit {
                            inc(&mut n.sigma, x);
                        }
                        self.push("kill".into(), n);
                    }
                }
                Element::EventBased { input, branches } => {
                    for b in branches {
                        self.receive(input, &b.msg, &b.out);
                    }
                }
                Element::AndSplit { input, outs } => {
                    let to: Vec<&str> = outs.iter().map(String::as_str).collect();
                    self.move_token(&[input], &to, tau());
                }
                Element::XorSplit { input, outs } => {
                    for o in outs {
                        self.move_token(&[input], &[o], tau());
                    }
                }
                Element::AndJoin { ins, out } => {
                    let from: Vec<&str> = ins.iter().map(String::as_str).collect();
                    self.move_token(&from, &[out], tau());
                }
                Element::XorJoin { ins, out } => {
                    for i in ins {
                        self.move_token(&[i], &[out], tau());
                    }
                }
                Element::SubProcess { input, body, out } => {
                    if let Some(enb) = enabling_of(body) {
                        self.move_token(&[input], &[&enb], tau());
                    }
                    let inner = edges_of(body);
                    let cmps = completing_of(body);
                    let marked: Vec<&String> =
                        self.s.sigma.keys().filter(|k| inner.contains(*k)).collect();
                    let finished = !marked.is_empty() && marked.iter().all(|k| cmps.contains(*k));
                    if finished {
                        let mut n = self.s.clone();
                        n.sigma.retain(|k, _| !cmps.contains(k));
                        inc(&mut n.sigma, out);
                        self.push(tau(), n);
                    }
                    self.scope(body, &inner, Some(out));
                }
            }
        }
    }
}

/// A model prepared for the oracle.
pub struct Oracle {
    pools: Vec<Pool>,
    collaborative: bool,
    pool_edges: Vec<BTreeSet<String>>,
    pool_completing: Vec<BTreeSet<String>>,
}

impl Oracle {
    pub fn collaboration(m: &Collaboration) -> Self {
        Self::new(m.pools.clone(), true)
    }

    pub fn process(pool: &Pool) -> Self {
        Self::new(vec![pool.clone()], false)
    }

    fn new(pools: Vec<Pool>, collaborative: bool) -> Self {
        let pool_edges = pools.iter().map(|p| edges_of(&p.process)).collect();
        let pool_completing = pools.iter().map(|p| completing_of(&p.process)).collect();
        Self { pools, collaborative, pool_edges, pool_completing }
    }

    pub fn initial(&self) -> State {
        let mut s = State::default();
        for p in &self.pools {
            if let Some(e) = enabling_of(&p.process) {
                inc(&mut s.sigma, &e);
            }
        }
        s
    }

    pub fn steps(&self, s: &State) -> Vec<OStep> {
        let mut out = Vec::new();
        for p in &self.pools {
            let mut w = Walker { s, collaborative: self.collaborative, pool: &p.name, out: Vec::new() };
            w.scope(&p.process, &edges_of(&p.process), None);
            out.append(&mut w.out);
        }
        out
    }

    fn pool_good(&self, i: usize, s: &State) -> bool {
        s.sigma
            .iter()
            .filter(|(k, _)| self.pool_edges[i].contains(*k))
            .all(|(k, &v)| self.pool_completing[i].contains(k) && v == 1)
    }

    /// All pools cleanly finished or cleared; `queues` also demands no
    /// pending message.
    pub fn good(&self, s: &State, queues: bool) -> bool {
        (0..self.pools.len()).all(|i| self.pool_good(i, s)) && (!queues || s.delta.is_empty())
    }

    /// Exact reachability graph, or `None` past `limit` states.
    pub fn explore(&self, limit: usize) -> Option<Graph> {
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut states = Vec::new();
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        let init = self.initial();
        index.insert(init.clone(), 0);
        states.push(init);
        succ.push(Vec::new());
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            for (_, _, n) in self.steps(&states[i].clone()) {
                let j = match index.get(&n) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= limit {
                            return None;
                        }
                        let j = states.len();
                        index.insert(n.clone(), j);
                        states.push(n);
                        succ.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                succ[i].push(j);
            }
        }
        Some(Graph { states, succ })
    }
}

pub struct Graph {
    pub states: Vec<State>,
    pub succ: Vec<Vec<usize>>,
}

impl Graph {
    pub fn safe(&self) -> bool {
        self.states.iter().all(|s| s.sigma.values().all(|&v| v <= 1))
    }

    /// Every reachable state can reach a state satisfying `good`.
    pub fn always_can_reach(&self, good: impl Fn(&State) -> bool) -> bool {
        let mut ok: Vec<bool> = self.states.iter().map(good).collect();
        loop {
            let mut changed = false;
            for i in 0..ok.len() {
                if !ok[i] && self.succ[i].iter().any(|&j| ok[j]) {
                    ok[i] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        ok.iter().all(|&b| b)
    }
}

/// Oracle verdicts of one model: per pool (safe, sound), then the
/// collaboration (safe, sound, mr-sound). `None` if any exploration
/// exceeds `limit`.
pub type Verdicts = (Vec<(bool, bool)>, (bool, bool, bool));

pub fn verdicts(m: &Collaboration, limit: usize) -> Option<Verdicts> {
    let mut pools = Vec::new();
    for p in &m.pools {
        let o = Oracle::process(p);
        let g = o.explore(limit)?;
        pools.push((g.safe(), g.always_can_reach(|s| o.good(s, false))));
    }
    let o = Oracle::collaboration(m);
    let g = o.explore(limit)?;
    let collab = (g.safe(), g.always_can_reach(|s| o.good(s, true)), g.always_can_reach(|s| o.good(s, false)));
    Some((pools, collab))
}
