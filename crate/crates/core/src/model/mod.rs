//! Abstract syntax of collaborations.
//!
//! A [`Collaboration`] is a list of pools, each holding a [`Process`]. A
//! process is a flat list of [`Element`]s wired together by named sequence
//! edges; a sub-process carries its own nested [`Process`] as a separate
//! scope. Message names are global to the collaboration.

mod json;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

pub use json::{from_json, to_json, JsonError};
pub use validate::{validate, validate_process, Diagnostic, DiagnosticKind, Severity};

/// Role of a sequence edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Normal,
    /// Activation slot of a start event.
    Enabling,
    /// Completion slot of an end-type event.
    Completing,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Normal => "normal",
            EdgeKind::Enabling => "enabling",
            EdgeKind::Completing => "completing",
        })
    }
}

/// A sequence edge together with its kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId {
    pub name: String,
    pub kind: EdgeKind,
}

impl EdgeId {
    pub fn new(name: impl Into<String>, kind: EdgeKind) -> Self {
        Self { name: name.into(), kind }
    }
}

/// One branch of an event-based gateway.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    pub msg: String,
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Start { enb: String, out: String },
    End { input: String, cmp: String },
    StartMsg { enb: String, msg: String, out: String },
    EndMsg { input: String, msg: String, cmp: String },
    Terminate { input: String },
    EventBased { input: String, branches: Vec<Branch> },
    AndSplit { input: String, outs: Vec<String> },
    XorSplit { input: String, outs: Vec<String> },
    AndJoin { ins: Vec<String>, out: String },
    XorJoin { ins: Vec<String>, out: String },
    Task { input: String, out: String },
    ReceiveTask { input: String, msg: String, out: String },
    SendTask { input: String, msg: String, out: String },
    EmptyTask { input: String, out: String },
    CatchEvent { input: String, msg: String, out: String },
    ThrowEvent { input: String, msg: String, out: String },
    SubProcess { input: String, body: Process, out: String },
}

/// Whether an element slot consumes or produces tokens on its edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotRole {
    Input,
    Output,
}

/// One edge occurrence on an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot<'a> {
    pub edge: &'a str,
    pub kind: EdgeKind,
    pub role: SlotRole,
}

/// Name of the completing edge a terminate event carries internally.
///
/// The `.` cannot appear in a DSL identifier, so the name never clashes
/// with a user edge.
pub fn terminate_completion_edge(input: &str) -> String {
    format!("{input}.cmp")
}

impl Element {
    /// Constructor name, as used by the DSL and the JSON form.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Element::Start { .. } => "start",
            Element::End { .. } => "end",
            Element::StartMsg { .. } => "startMsg",
            Element::EndMsg { .. } => "endMsg",
            Element::Terminate { .. } => "terminate",
            Element::EventBased { .. } => "eventBased",
            Element::AndSplit { .. } => "andSplit",
            Element::XorSplit { .. } => "xorSplit",
            Element::AndJoin { .. } => "andJoin",
            Element::XorJoin { .. } => "xorJoin",
            Element::Task { .. } => "task",
            Element::ReceiveTask { .. } => "receiveTask",
            Element::SendTask { .. } => "sendTask",
            Element::EmptyTask { .. } => "emptyTask",
            Element::CatchEvent { .. } => "catchEvent",
            Element::ThrowEvent { .. } => "throwEvent",
            Element::SubProcess { .. } => "subProcess",
        }
    }

    pub fn is_start(&self) -> bool {
        matches!(self, Element::Start { .. } | Element::StartMsg { .. })
    }

    /// End, message end and terminate events.
    pub fn is_end(&self) -> bool {
        matches!(
            self,
            Element::End { .. } | Element::EndMsg { .. } | Element::Terminate { .. }
        )
    }

    /// Messages this element sends.
    pub fn sent_message(&self) -> Option<&str> {
        match self {
            Element::EndMsg { msg, .. }
            | Element::SendTask { msg, .. }
            | Element::ThrowEvent { msg, .. } => Some(msg),
            _ => None,
        }
    }

    /// Messages this element may receive.
    pub fn received_messages(&self) -> Vec<&str> {
        match self {
            Element::StartMsg { msg, .. }
            | Element::ReceiveTask { msg, .. }
            | Element::CatchEvent { msg, .. } => vec![msg.as_str()],
            Element::EventBased { branches, .. } => {
                branches.iter().map(|b| b.msg.as_str()).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Edge occurrences of this element in its own scope. Sub-process body
    /// edges are not included.
    pub fn slots(&self) -> Vec<Slot<'_>> {
        use EdgeKind::*;
        use SlotRole::*;
        fn slot(edge: &str, kind: EdgeKind, role: SlotRole) -> Slot<'_> {
            Slot { edge, kind, role }
        }
        // The synthesized terminate edge has no borrowed name; callers that
        // need it use `completing_edge_names`.
        match self {
            Element::Start { enb, out } | Element::StartMsg { enb, out, .. } => {
                vec![slot(enb, Enabling, Input), slot(out, Normal, Output)]
            }
            Element::End { input, cmp } | Element::EndMsg { input, cmp, .. } => {
                vec![slot(input, Normal, Input), slot(cmp, Completing, Output)]
            }
            Element::Terminate { input } => vec![slot(input, Normal, Input)],
            Element::EventBased { input, branches } => {
                let mut v = vec![slot(input, Normal, Input)];
                v.extend(branches.iter().map(|b| slot(&b.out, Normal, Output)));
                v
            }
            Element::AndSplit { input, outs } | Element::XorSplit { input, outs } => {
                let mut v = vec![slot(input, Normal, Input)];
                v.extend(outs.iter().map(|o| slot(o, Normal, Output)));
                v
            }
            Element::AndJoin { ins, out } | Element::XorJoin { ins, out } => {
                let mut v: Vec<_> = ins.iter().map(|i| slot(i, Normal, Input)).collect();
                v.push(slot(out, Normal, Output));
                v
            }
            Element::Task { input, out }
            | Element::EmptyTask { input, out }
            | Element::ReceiveTask { input, out, .. }
            | Element::SendTask { input, out, .. }
            | Element::CatchEvent { input, out, .. }
            | Element::ThrowEvent { input, out, .. }
            | Element::SubProcess { input, out, .. } => {
                vec![slot(input, Normal, Input), slot(out, Normal, Output)]
            }
        }
    }

    /// Completing edges owned by this element, including the internal one
    /// of a terminate event.
    pub fn completing_edge_names(&self) -> Vec<String> {
        match self {
            Element::End { cmp, .. } | Element::EndMsg { cmp, .. } => vec![cmp.clone()],
            Element::Terminate { input } => vec![terminate_completion_edge(input)],
            _ => Vec::new(),
        }
    }

    /// Normal edges this element consumes from.
    pub fn inputs(&self) -> Vec<&str> {
        self.slots()
            .into_iter()
            .filter(|s| s.role == SlotRole::Input && s.kind == EdgeKind::Normal)
            .map(|s| s.edge)
            .collect()
    }

    /// Normal edges this element produces on.
    pub fn outputs(&self) -> Vec<&str> {
        self.slots()
            .into_iter()
            .filter(|s| s.role == SlotRole::Output && s.kind == EdgeKind::Normal)
            .map(|s| s.edge)
            .collect()
    }
}

/// A process scope: the flattened parallel composition of its elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Process {
    pub elements: Vec<Element>,
}

impl Process {
    pub fn new(elements: Vec<Element>) -> Self {
        Self { elements }
    }

    /// Every edge of the process, recursively including sub-process bodies
    /// and the enabling/completing edges.
    pub fn edges(&self) -> BTreeSet<EdgeId> {
        let mut out = BTreeSet::new();
        self.collect_edges(&mut out);
        out
    }

    fn collect_edges(&self, out: &mut BTreeSet<EdgeId>) {
        for el in &self.elements {
            for s in el.slots() {
                out.insert(EdgeId::new(s.edge, s.kind));
            }
            for c in el.completing_edge_names() {
                out.insert(EdgeId::new(c, EdgeKind::Completing));
            }
            if let Element::SubProcess { body, .. } = el {
                body.collect_edges(out);
            }
        }
    }

    /// Completing edges of this scope only.
    pub fn completing_edges(&self) -> BTreeSet<EdgeId> {
        self.elements
            .iter()
            .flat_map(|e| e.completing_edge_names())
            .map(|n| EdgeId::new(n, EdgeKind::Completing))
            .collect()
    }

    /// The enabling edge of the (first) start event of this scope.
    pub fn start_enabling_edge(&self) -> Option<&str> {
        self.elements.iter().find_map(|e| match e {
            Element::Start { enb, .. } | Element::StartMsg { enb, .. } => Some(enb.as_str()),
            _ => None,
        })
    }

    /// Number of elements, counting sub-process bodies recursively.
    pub fn element_count(&self) -> usize {
        self.elements
            .iter()
            .map(|e| match e {
                Element::SubProcess { body, .. } => 1 + body.element_count(),
                _ => 1,
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pool {
    pub name: String,
    pub process: Process,
}

impl Pool {
    pub fn new(name: impl Into<String>, process: Process) -> Self {
        Self { name: name.into(), process }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Collaboration {
    pub pools: Vec<Pool>,
}

impl Collaboration {
    pub fn new(pools: Vec<Pool>) -> Self {
        Self { pools }
    }

    pub fn pool(&self, name: &str) -> Option<&Pool> {
        self.pools.iter().find(|p| p.name == name)
    }

    /// All message names referenced anywhere, sorted.
    pub fn messages(&self) -> BTreeSet<String> {
        fn walk(p: &Process, out: &mut BTreeSet<String>) {
            for el in &p.elements {
                if let Some(m) = el.sent_message() {
                    out.insert(m.to_string());
                }
                for m in el.received_messages() {
                    out.insert(m.to_string());
                }
                if let Element::SubProcess { body, .. } = el {
                    walk(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        for pool in &self.pools {
            walk(&pool.process, &mut out);
        }
        out
    }
}

/// Location of an element: pool name plus the index path through nested
/// sub-processes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementPath {
    pub indices: Vec<usize>,
    pub kinds: Vec<&'static str>,
}

impl ElementPath {
    pub fn root() -> Self {
        Self { indices: Vec::new(), kinds: Vec::new() }
    }

    pub fn child(&self, index: usize, kind: &'static str) -> Self {
        let mut p = self.clone();
        p.indices.push(index);
        p.kinds.push(kind);
        p
    }
}

impl fmt::Display for ElementPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return f.write_str("/");
        }
        for (i, (idx, kind)) in self.indices.iter().zip(&self.kinds).enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{kind}@{idx}")?;
        }
        Ok(())
    }
}
