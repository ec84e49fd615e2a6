//! Well-structuredness by graph reduction.
//!
//! Each process scope becomes a [`FlowGraph`] whose arcs are its normal
//! sequence edges. Three rules shrink the graph:
//!
//! * R1 replaces a one-in/one-out activity or event by an arc.
//! * R2 replaces a split whose branches all meet at one matching join.
//! * R3 replaces an exclusive loop: join, one arc, split with a back arc.
//!
//! A scope is well-structured when it shrinks to `start -> end` and every
//! nested sub-process body is well-structured too.

use std::collections::BTreeMap;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Collaboration, Element, ElementPath, Process};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gate {
    And,
    Xor,
    Event,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeClass {
    Entry,
    Exit,
    /// Activity or event; `false` for a sub-process with an unstructured body.
    Chain(bool),
    Split(Gate),
    Join(Gate),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    class: NodeClass,
    pub alive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub src: usize,
    pub tgt: usize,
    pub label: String,
    pub alive: bool,
}

/// Control-flow graph of one scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowGraph {
    pub nodes: Vec<Node>,
    pub arcs: Vec<Arc>,
}

/// Outcome of reducing one scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub well_structured: bool,
    /// Applied reductions, in order.
    pub log: Vec<String>,
    /// What is left of the graph once no rule applies.
    pub residue: FlowGraph,
    /// Reductions of nested sub-process bodies, keyed by element path.
    pub nested: Vec<(String, Reduction)>,
}

#[derive(Debug, Clone, Copy)]
enum Candidate {
    R1(usize),
    R2(usize, usize),
    R3(usize, usize),
}

impl FlowGraph {
    fn ins(&self, n: usize) -> Vec<usize> {
        (0..self.arcs.len()).filter(|&a| self.arcs[a].alive && self.arcs[a].tgt == n).collect()
    }

    fn outs(&self, n: usize) -> Vec<usize> {
        (0..self.arcs.len()).filter(|&a| self.arcs[a].alive && self.arcs[a].src == n).collect()
    }

    fn live_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].alive).collect()
    }

    fn candidates(&self) -> Vec<Candidate> {
        let mut out = Vec::new();
        for n in self.live_nodes() {
            let (ins, outs) = (self.ins(n), self.outs(n));
            match self.nodes[n].class {
                NodeClass::Chain(true) => {
                    if ins.len() == 1 && outs.len() == 1 && self.arcs[ins[0]].src != n {
                        out.push(Candidate::R1(n));
                    }
                }
                NodeClass::Split(gate) if ins.len() == 1 && outs.len() >= 2 => {
                    let j = self.arcs[outs[0]].tgt;
                    let matching = matches!(
                        (gate, self.nodes[j].class),
                        (Gate::And, NodeClass::Join(Gate::And)) | (Gate::Xor | Gate::Event, NodeClass::Join(Gate::Xor))
                    );
                    let j_outs = self.outs(j);
                    if matching
                        && outs.iter().all(|&a| self.arcs[a].tgt == j)
                        && self.ins(j).len() == outs.len()
                        && j_outs.len() == 1
                        && j_outs[0] != ins[0]
                    {
                        out.push(Candidate::R2(n, j));
                    }
                }
                NodeClass::Join(Gate::Xor) if ins.len() == 2 && outs.len() == 1 => {
                    let s = self.arcs[outs[0]].tgt;
                    if s == n || self.nodes[s].class != NodeClass::Split(Gate::Xor) {
                        continue;
                    }
                    let s_outs = self.outs(s);
                    let back = s_outs.iter().filter(|&&a| self.arcs[a].tgt == n).count();
                    let from_s = ins.iter().filter(|&&a| self.arcs[a].src == s).count();
                    if self.ins(s).len() == 1 && s_outs.len() == 2 && back == 1 && from_s == 1 {
                        out.push(Candidate::R3(n, s));
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn kill_arc(&mut self, a: usize) {
        self.arcs[a].alive = false;
    }

    fn bridge(&mut self, from: usize, to: usize) {
        let label = format!("{}..{}", self.arcs[from].label, self.arcs[to].label);
        let (src, tgt) = (self.arcs[from].src, self.arcs[to].tgt);
        self.kill_arc(from);
        self.kill_arc(to);
        self.arcs.push(Arc { src, tgt, label, alive: true });
    }

    fn apply(&mut self, c: Candidate) -> String {
        match c {
            Candidate::R1(n) => {
                let (i, o) = (self.ins(n)[0], self.outs(n)[0]);
                self.nodes[n].alive = false;
                self.bridge(i, o);
                format!("R1 {}", self.nodes[n].label)
            }
            Candidate::R2(s, j) => {
                let (i, o) = (self.ins(s)[0], self.outs(j)[0]);
                for a in self.outs(s) {
                    self.kill_arc(a);
                }
                self.nodes[s].alive = false;
                self.nodes[j].alive = false;
                self.bridge(i, o);
                format!("R2 {} + {}", self.nodes[s].label, self.nodes[j].label)
            }
            Candidate::R3(j, s) => {
                let entry = self.ins(j).into_iter().find(|&a| self.arcs[a].src != s).unwrap();
                let exit = self.outs(s).into_iter().find(|&a| self.arcs[a].tgt != j).unwrap();
                let back = self.outs(s).into_iter().find(|&a| self.arcs[a].tgt == j).unwrap();
                let mid = self.outs(j)[0];
                self.kill_arc(back);
                self.kill_arc(mid);
                self.nodes[j].alive = false;
                self.nodes[s].alive = false;
                self.bridge(entry, exit);
                format!("R3 {} + {}", self.nodes[j].label, self.nodes[s].label)
            }
        }
    }

    fn is_trivial(&self) -> bool {
        let live = self.live_nodes();
        let arcs: Vec<_> = self.arcs.iter().filter(|a| a.alive).collect();
        live.len() == 2
            && arcs.len() == 1
            && self.nodes[arcs[0].src].class == NodeClass::Entry
            && self.nodes[arcs[0].tgt].class == NodeClass::Exit
    }

    /// Live part of the graph as DOT.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=LR;\n");
        for n in self.live_nodes() {
            let shape = match self.nodes[n].class {
                NodeClass::Entry | NodeClass::Exit => "circle",
                NodeClass::Split(_) | NodeClass::Join(_) => "diamond",
                NodeClass::Chain(_) => "box",
            };
            let _ = writeln!(s, "  n{n} [label=\"{}\", shape={shape}];", self.nodes[n].label);
        }
        for a in self.arcs.iter().filter(|a| a.alive) {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", a.src, a.tgt, a.label);
        }
        s.push_str("}\n");
        s
    }
}

fn build(p: &Process, path: &ElementPath, nested: &mut Vec<(String, Reduction)>, order: &mut Order<'_>) -> FlowGraph {
    let mut nodes = Vec::new();
    let mut producer = BTreeMap::new();
    let mut consumer = BTreeMap::new();
    for (i, el) in p.elements.iter().enumerate() {
        let here = path.child(i, el.kind_name());
        let class = match el {
            Element::Start { .. } | Element::StartMsg { .. } => NodeClass::Entry,
            Element::End { .. } | Element::EndMsg { .. } | Element::Terminate { .. } => NodeClass::Exit,
            Element::AndSplit { .. } => NodeClass::Split(Gate::And),
            Element::XorSplit { .. } => NodeClass::Split(Gate::Xor),
            Element::EventBased { .. } => NodeClass::Split(Gate::Event),
            Element::AndJoin { .. } => NodeClass::Join(Gate::And),
            Element::XorJoin { .. } => NodeClass::Join(Gate::Xor),
            Element::SubProcess { body, .. } => {
                let r = reduce_scope(body, &here, order);
                let ok = r.well_structured;
                nested.push((here.to_string(), r));
                NodeClass::Chain(ok)
            }
            _ => NodeClass::Chain(true),
        };
        for e in el.outputs() {
            producer.insert(e.to_string(), i);
        }
        for e in el.inputs() {
            consumer.insert(e.to_string(), i);
        }
        nodes.push(Node { label: here.to_string(), class, alive: true });
    }
    let arcs = producer
        .iter()
        .filter_map(|(e, &src)| {
            consumer.get(e).map(|&tgt| Arc { src, tgt, label: e.clone(), alive: true })
        })
        .collect();
    FlowGraph { nodes, arcs }
}

enum Order<'a> {
    First,
    Random(&'a mut dyn rand::RngCore),
}

fn reduce_scope(p: &Process, path: &ElementPath, order: &mut Order<'_>) -> Reduction {
    let mut nested = Vec::new();
    let mut g = build(p, path, &mut nested, order);
    let mut log = Vec::new();
    loop {
        let cands = g.candidates();
        let pick = match order {
            Order::First => cands.first().copied(),
            Order::Random(rng) => cands.choose(rng).copied(),
        };
        match pick {
            Some(c) => log.push(g.apply(c)),
            None => break,
        }
    }
    let well_structured = g.is_trivial() && nested.iter().all(|(_, r)| r.well_structured);
    Reduction { well_structured, log, residue: g, nested }
}

/// Reduces a process with a fixed rule order.
pub fn is_well_structured_process(p: &Process) -> Reduction {
    reduce_scope(p, &ElementPath::root(), &mut Order::First)
}

/// Reduces a process picking among applicable rules at random.
pub fn reduce_in_random_order<R: Rng>(p: &Process, rng: &mut R) -> Reduction {
    reduce_scope(p, &ElementPath::root(), &mut Order::Random(rng))
}

pub fn is_well_structured_collaboration(model: &Collaboration) -> bool {
    model.pools.iter().all(|p| is_well_structured_process(&p.process).well_structured)
}

impl Reduction {
    /// Human-readable reduction log, nested bodies first.
    pub fn explain(&self) -> String {
        let mut s = String::new();
        self.explain_into(&mut s, "");
        s
    }

    fn explain_into(&self, s: &mut String, indent: &str) {
        for (path, r) in &self.nested {
            let _ = writeln!(s, "{indent}body of {path}:");
            r.explain_into(s, &format!("{indent}  "));
        }
        for line in &self.log {
            let _ = writeln!(s, "{indent}{line}");
        }
        if self.well_structured {
            let _ = writeln!(s, "{indent}reduced to a single arc");
        } else {
            let live: Vec<_> =
                self.residue.live_nodes().into_iter().map(|n| self.residue.nodes[n].label.clone()).collect();
            let _ = writeln!(s, "{indent}irreducible: {}", live.join(", "));
        }
    }
}
