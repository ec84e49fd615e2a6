//! Random well-formed collaborations for property tests.
//!
//! Each pool starts as `start -> end` and is grown by replacing a random
//! sequence edge with a small fragment: an activity, a split/join block
//! (gateway kinds may be mixed), an exclusive or parallel loop, a
//! sub-process, or an extra end branch. Message names are filled in
//! afterwards by pairing senders and receivers of different pools;
//! anything left unpaired becomes a plain activity or event.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Branch, Collaboration, Element, Pool, Process};

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_pools: usize,
    /// Per pool, counted through sub-process bodies.
    pub max_elements: usize,
    /// Whether loops that fork tokens may be generated.
    pub unbounded_loops: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_pools: 3, max_elements: 8, unbounded_loops: true }
    }
}

const PENDING: &str = "";

struct PoolGen<'r, R: Rng> {
    rng: &'r mut R,
    prefix: String,
    next: usize,
    cfg: GenConfig,
}

impl<R: Rng> PoolGen<'_, R> {
    fn edge(&mut self) -> String {
        self.next += 1;
        format!("{}{}", self.prefix, self.next)
    }

    fn base(&mut self) -> Process {
        let (a, b, c) = (self.edge(), self.edge(), self.edge());
        Process::new(vec![Element::Start { enb: a, out: b.clone() }, Element::End { input: b, cmp: c }])
    }

    fn activity(&mut self, input: String, out: String) -> Element {
        let msg = PENDING.to_string();
        match self.rng.gen_range(0..6) {
            0 => Element::Task { input, out },
            1 => Element::EmptyTask { input, out },
            2 => Element::SendTask { input, msg, out },
            3 => Element::ReceiveTask { input, msg, out },
            4 => Element::ThrowEvent { input, msg, out },
            _ => Element::CatchEvent { input, msg, out },
        }
    }

    /// Fragment taking `e` to `f`, using at most `room` elements.
    fn fragment(&mut self, e: String, f: String, room: usize) -> Vec<Element> {
        let mut options = vec![0];
        if room >= 2 {
            options.extend([1, 1, 2, 4]);
            if self.cfg.unbounded_loops {
                options.push(3);
            }
        }
        if room >= 3 {
            options.push(5);
        }
        match *options.choose(self.rng).unwrap() {
            0 => vec![self.activity(e, f)],
            1 => {
                let width = if room >= 3 && self.rng.gen_bool(0.2) { 3 } else { 2 };
                let branches: Vec<String> = (0..width).map(|_| self.edge()).collect();
                let split = match self.rng.gen_range(0..5) {
                    0 | 1 => Element::AndSplit { input: e, outs: branches.clone() },
                    2 | 3 => Element::XorSplit { input: e, outs: branches.clone() },
                    _ => Element::EventBased {
                        input: e,
                        branches: branches.iter().map(|b| Branch { msg: PENDING.into(), out: b.clone() }).collect(),
                    },
                };
                let join = if self.rng.gen_bool(0.5) {
                    Element::AndJoin { ins: branches, out: f }
                } else {
                    Element::XorJoin { ins: branches, out: f }
                };
                vec![split, join]
            }
            2 | 3 => {
                let (m, back) = (self.edge(), self.edge());
                let outs = vec![back.clone(), f];
                let split = if self.cfg.unbounded_loops && self.rng.gen_bool(0.3) {
                    Element::AndSplit { input: m.clone(), outs }
                } else {
                    Element::XorSplit { input: m.clone(), outs }
                };
                vec![Element::XorJoin { ins: vec![e, back], out: m }, split]
            }
            4 => {
                let g = self.edge();
                let split = if self.rng.gen_bool(0.5) {
                    Element::XorSplit { input: e, outs: vec![f, g.clone()] }
                } else {
                    Element::AndSplit { input: e, outs: vec![f, g.clone()] }
                };
                let end = if self.rng.gen_bool(0.4) {
                    Element::Terminate { input: g }
                } else {
                    let c = self.edge();
                    Element::End { input: g, cmp: c }
                };
                vec![split, end]
            }
            _ => {
                let body = self.base();
                vec![Element::SubProcess { input: e, body, out: f }]
            }
        }
    }

    fn grow(&mut self) -> Process {
        let mut p = self.base();
        loop {
            let used = p.element_count();
            if used >= self.cfg.max_elements || self.rng.gen_bool(0.12) {
                break;
            }
            let room = self.cfg.max_elements - used;
            let mut edges = Vec::new();
            normal_edges(&p, &mut Vec::new(), &mut edges);
            let (scope, e) = edges.choose(self.rng).unwrap().clone();
            let f = self.edge();
            let frag = self.fragment(e.clone(), f.clone(), room);
            let target = scope_mut(&mut p, &scope);
            let consumer = target.elements.iter().position(|el| el.inputs().contains(&e.as_str())).unwrap();
            rename_input(&mut target.elements[consumer], &e, &f);
            for (k, el) in frag.into_iter().enumerate() {
                target.elements.insert(consumer + k, el);
            }
        }
        if self.rng.gen_bool(0.2) {
            if let Element::Start { enb, out } = p.elements[0].clone() {
                p.elements[0] = Element::StartMsg { enb, msg: PENDING.into(), out };
            }
        }
        if self.rng.gen_bool(0.2) {
            if let Some(i) = p.elements.iter().position(|e| matches!(e, Element::End { .. })) {
                if let Element::End { input, cmp } = p.elements[i].clone() {
                    p.elements[i] = Element::EndMsg { input, msg: PENDING.into(), cmp };
                }
            }
        }
        p
    }
}

fn normal_edges(p: &Process, scope: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, String)>) {
    for (i, el) in p.elements.iter().enumerate() {
        for e in el.outputs() {
            out.push((scope.clone(), e.to_string()));
        }
        if let Element::SubProcess { body, .. } = el {
            scope.push(i);
            normal_edges(body, scope, out);
            scope.pop();
        }
    }
}

fn scope_mut<'a>(p: &'a mut Process, scope: &[usize]) -> &'a mut Process {
    match scope.split_first() {
        None => p,
        Some((&i, rest)) => match &mut p.elements[i] {
            Element::SubProcess { body, .. } => scope_mut(body, rest),
            _ => unreachable!("scope paths point at sub-processes"),
        },
    }
}

fn rename_input(el: &mut Element, from: &str, to: &str) {
    match el {
        Element::AndJoin { ins, .. } | Element::XorJoin { ins, .. } => {
            for x in ins.iter_mut().filter(|x| *x == from) {
                *x = to.to_string();
            }
        }
        Element::End { input, .. }
        | Element::EndMsg { input, .. }
        | Element::Terminate { input }
        | Element::EventBased { input, .. }
        | Element::AndSplit { input, .. }
        | Element::XorSplit { input, .. }
        | Element::Task { input, .. }
        | Element::ReceiveTask { input, .. }
        | Element::SendTask { input, .. }
        | Element::EmptyTask { input, .. }
        | Element::CatchEvent { input, .. }
        | Element::ThrowEvent { input, .. }
        | Element::SubProcess { input, .. } => *input = to.to_string(),
        Element::Start { .. } | Element::StartMsg { .. } => {}
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SlotKind {
    Send,
    Receive,
    /// One branch of an event-based gateway.
    Branch,
}

#[derive(Debug, Clone)]
struct MsgSlot {
    pool: usize,
    kind: SlotKind,
    /// Index of the owning element's first slot, to group gateway branches.
    owner: usize,
}

fn collect_slots(p: &Process, pool: usize, out: &mut Vec<MsgSlot>) {
    for el in &p.elements {
        let owner = out.len();
        match el {
            Element::SendTask { msg, .. } | Element::ThrowEvent { msg, .. } | Element::EndMsg { msg, .. }
                if msg == PENDING =>
            {
                out.push(MsgSlot { pool, kind: SlotKind::Send, owner })
            }
            Element::ReceiveTask { msg, .. } | Element::CatchEvent { msg, .. } | Element::StartMsg { msg, .. }
                if msg == PENDING =>
            {
                out.push(MsgSlot { pool, kind: SlotKind::Receive, owner })
            }
            Element::EventBased { branches, .. } => {
                for _ in branches {
                    out.push(MsgSlot { pool, kind: SlotKind::Branch, owner });
                }
            }
            Element::SubProcess { body, .. } => collect_slots(body, pool, out),
            _ => {}
        }
    }
}

/// Chooses a message name per slot; `None` means the element is degraded.
fn assign_messages<R: Rng>(slots: &[MsgSlot], rng: &mut R) -> Vec<Option<String>> {
    let mut names: Vec<Option<String>> = vec![None; slots.len()];
    let of = |k: SlotKind| -> Vec<usize> { (0..slots.len()).filter(|&i| slots[i].kind == k).collect() };
    let (mut sends, mut recvs, branches) = (of(SlotKind::Send), of(SlotKind::Receive), of(SlotKind::Branch));
    sends.shuffle(rng);
    recvs.shuffle(rng);
    let mut fresh = 0;
    for &s in &sends {
        if let Some(&r) = recvs.iter().find(|&&r| names[r].is_none() && slots[r].pool != slots[s].pool) {
            let name = format!("M{fresh}");
            fresh += 1;
            names[s] = Some(name.clone());
            names[r] = Some(name);
        }
    }
    let sent_elsewhere = |names: &[Option<String>], pool: usize, rng: &mut R| -> Option<String> {
        let options: Vec<&String> = sends
            .iter()
            .filter(|&&s| slots[s].pool != pool)
            .filter_map(|&s| names[s].as_ref())
            .collect();
        options.choose(rng).map(|s| s.to_string())
    };
    // Gateway branches only reuse names, so dropping a gateway orphans nothing.
    let mut dropped_owners = Vec::new();
    for &b in &branches {
        names[b] = sent_elsewhere(&names, slots[b].pool, rng);
        if names[b].is_none() {
            dropped_owners.push(slots[b].owner);
        }
    }
    for &b in &branches {
        if dropped_owners.contains(&slots[b].owner) {
            names[b] = None;
        }
    }
    for &r in &recvs {
        if names[r].is_none() {
            names[r] = sent_elsewhere(&names, slots[r].pool, rng);
        }
    }
    for &s in &sends {
        if names[s].is_none() {
            let options: Vec<String> = (0..slots.len())
                .filter(|&i| slots[i].kind != SlotKind::Send && slots[i].pool != slots[s].pool)
                .filter_map(|i| names[i].clone())
                .collect();
            names[s] = options.choose(rng).cloned();
        }
    }
    names
}

fn apply_messages(p: &mut Process, names: &[Option<String>], next: &mut usize) {
    for el in p.elements.iter_mut() {
        let replacement = match el {
            Element::SendTask { input, msg, out } | Element::ReceiveTask { input, msg, out } if msg == PENDING => {
                let name = names[*next].clone();
                *next += 1;
                match name {
                    Some(n) => {
                        *msg = n;
                        None
                    }
                    None => Some(Element::Task { input: input.clone(), out: out.clone() }),
                }
            }
            Element::ThrowEvent { input, msg, out } | Element::CatchEvent { input, msg, out } if msg == PENDING => {
                let name = names[*next].clone();
                *next += 1;
                match name {
                    Some(n) => {
                        *msg = n;
                        None
                    }
                    None => Some(Element::EmptyTask { input: input.clone(), out: out.clone() }),
                }
            }
            Element::StartMsg { enb, msg, out } if msg == PENDING => {
                let name = names[*next].clone();
                *next += 1;
                match name {
                    Some(n) => {
                        *msg = n;
                        None
                    }
                    None => Some(Element::Start { enb: enb.clone(), out: out.clone() }),
                }
            }
            Element::EndMsg { input, msg, cmp } if msg == PENDING => {
                let name = names[*next].clone();
                *next += 1;
                match name {
                    Some(n) => {
                        *msg = n;
                        None
                    }
                    None => Some(Element::End { input: input.clone(), cmp: cmp.clone() }),
                }
            }
            Element::EventBased { input, branches } => {
                let chosen: Vec<Option<String>> = names[*next..*next + branches.len()].to_vec();
                *next += branches.len();
                if chosen.iter().all(|c| c.is_some()) {
                    for (b, n) in branches.iter_mut().zip(chosen) {
                        b.msg = n.unwrap();
                    }
                    None
                } else {
                    Some(Element::XorSplit {
                        input: input.clone(),
                        outs: branches.iter().map(|b| b.out.clone()).collect(),
                    })
                }
            }
            Element::SubProcess { body, .. } => {
                apply_messages(body, names, next);
                None
            }
            _ => None,
        };
        if let Some(r) = replacement {
            *el = r;
        }
    }
}

/// A random well-formed collaboration.
pub fn random_model<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Collaboration {
    let pools = rng.gen_range(1..=cfg.max_pools);
    let mut processes: Vec<Process> = (0..pools)
        .map(|i| {
            let mut g = PoolGen { rng: &mut *rng, prefix: format!("p{i}e"), next: 0, cfg: *cfg };
            g.grow()
        })
        .collect();
    let mut slots = Vec::new();
    for (i, p) in processes.iter().enumerate() {
        collect_slots(p, i, &mut slots);
    }
    let names = assign_messages(&slots, rng);
    let mut next = 0;
    for p in processes.iter_mut() {
        apply_messages(p, &names, &mut next);
    }
    Collaboration::new(
        processes.into_iter().enumerate().map(|(i, p)| Pool::new(format!("P{i}"), p)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_models_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = GenConfig::default();
        let mut with_messages = 0;
        for _ in 0..500 {
            let m = random_model(&mut rng, &cfg);
            let errors: Vec<_> = validate(&m).into_iter().filter(|d| d.is_error()).collect();
            assert!(errors.is_empty(), "{errors:?}\n{}", crate::parser::pretty(&m));
            assert!(m.pools.len() <= 3);
            assert!(m.pools.iter().all(|p| p.process.element_count() <= 8));
            if !m.messages().is_empty() {
                with_messages += 1;
            }
        }
        assert!(with_messages > 50);
    }
}
