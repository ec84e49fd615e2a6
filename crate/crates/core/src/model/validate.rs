use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::{Collaboration, EdgeKind, Element, ElementPath, Process, SlotRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    EmptyCollaboration,
    DuplicatePool(String),
    InvalidName(String),
    MissingStart,
    MultipleStarts,
    MissingEnd,
    /// A split or join with fewer than two members, or an event-based
    /// gateway with fewer than two branches.
    TooFewBranches,
    DuplicateEdgeSource(String),
    DuplicateEdgeTarget(String),
    MissingEdgeSource(String),
    MissingEdgeTarget(String),
    EdgeKindConflict(String),
    EdgeCrossesScope(String),
    UnmatchedMessage(String),
    UnreachableElement,
}

impl DiagnosticKind {
    pub fn rule_id(&self) -> &'static str {
        match self {
            DiagnosticKind::EmptyCollaboration => "empty-collaboration",
            DiagnosticKind::DuplicatePool(_) => "duplicate-pool",
            DiagnosticKind::InvalidName(_) => "invalid-name",
            DiagnosticKind::MissingStart => "missing-start",
            DiagnosticKind::MultipleStarts => "multiple-starts",
            DiagnosticKind::MissingEnd => "missing-end",
            DiagnosticKind::TooFewBranches => "too-few-branches",
            DiagnosticKind::DuplicateEdgeSource(_) => "duplicate-edge-source",
            DiagnosticKind::DuplicateEdgeTarget(_) => "duplicate-edge-target",
            DiagnosticKind::MissingEdgeSource(_) => "missing-edge-source",
            DiagnosticKind::MissingEdgeTarget(_) => "missing-edge-target",
            DiagnosticKind::EdgeKindConflict(_) => "edge-kind-conflict",
            DiagnosticKind::EdgeCrossesScope(_) => "edge-crosses-scope",
            DiagnosticKind::UnmatchedMessage(_) => "unmatched-message",
            DiagnosticKind::UnreachableElement => "unreachable-element",
        }
    }

    pub fn severity(&self) -> Severity {
        match self {
            DiagnosticKind::UnreachableElement => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    /// `pool/element-path`, or just the pool name for scope-level problems.
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn severity(&self) -> Severity {
        self.kind.severity()
    }

    pub fn is_error(&self) -> bool {
        self.severity() == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity() {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] {}: {}", self.kind.rule_id(), self.path, self.message)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Occurrence {
    kind: EdgeKind,
    role: SlotRole,
    scope: usize,
    path: String,
}

#[derive(Default)]
struct Collector {
    diags: Vec<Diagnostic>,
    occurrences: BTreeMap<String, Vec<Occurrence>>,
    sends: BTreeMap<String, BTreeSet<usize>>,
    receives: BTreeMap<String, BTreeSet<usize>>,
    first_message_use: BTreeMap<String, String>,
    next_scope: usize,
}

impl Collector {
    fn push(&mut self, kind: DiagnosticKind, path: impl Into<String>, message: impl Into<String>) {
        self.diags.push(Diagnostic { kind, path: path.into(), message: message.into() });
    }

    fn check_name(&mut self, name: &str, path: &str) {
        if !is_identifier(name) {
            self.push(
                DiagnosticKind::InvalidName(name.to_string()),
                path,
                format!("`{name}` is not a valid identifier"),
            );
        }
    }

    fn scope(&mut self, pool_idx: usize, pool: &str, process: &Process, base: &ElementPath) {
        let scope_id = self.next_scope;
        self.next_scope += 1;
        let scope_path = if base.indices.is_empty() {
            pool.to_string()
        } else {
            format!("{pool}/{base}")
        };

        let starts = process.elements.iter().filter(|e| e.is_start()).count();
        if starts == 0 {
            self.push(DiagnosticKind::MissingStart, &scope_path, "scope has no start event");
        } else if starts > 1 {
            self.push(
                DiagnosticKind::MultipleStarts,
                &scope_path,
                format!("scope has {starts} start events"),
            );
        }
        if !process.elements.iter().any(|e| e.is_end()) {
            self.push(DiagnosticKind::MissingEnd, &scope_path, "scope has no end event");
        }

        for (idx, el) in process.elements.iter().enumerate() {
            let here = base.child(idx, el.kind_name());
            let path = format!("{pool}/{here}");

            let arity_ok = match el {
                Element::EventBased { branches, .. } => branches.len() >= 2,
                Element::AndSplit { outs, .. } | Element::XorSplit { outs, .. } => outs.len() >= 2,
                Element::AndJoin { ins, .. } | Element::XorJoin { ins, .. } => ins.len() >= 2,
                _ => true,
            };
            if !arity_ok {
                self.push(
                    DiagnosticKind::TooFewBranches,
                    &path,
                    format!("{} needs at least two branches", el.kind_name()),
                );
            }

            for slot in el.slots() {
                self.check_name(slot.edge, &path);
                self.occurrences.entry(slot.edge.to_string()).or_default().push(Occurrence {
                    kind: slot.kind,
                    role: slot.role,
                    scope: scope_id,
                    path: path.clone(),
                });
            }
            if let Some(m) = el.sent_message() {
                self.check_name(m, &path);
                self.sends.entry(m.to_string()).or_default().insert(pool_idx);
                self.first_message_use.entry(m.to_string()).or_insert_with(|| path.clone());
            }
            for m in el.received_messages() {
                self.check_name(m, &path);
                self.receives.entry(m.to_string()).or_default().insert(pool_idx);
                self.first_message_use.entry(m.to_string()).or_insert_with(|| path.clone());
            }
            if let Element::SubProcess { body, .. } = el {
                self.scope(pool_idx, pool, body, &here);
            }
        }
        self.reachability(pool, process, base);
    }

    fn reachability(&mut self, pool: &str, process: &Process, base: &ElementPath) {
        let Some(start) = process.elements.iter().position(|e| e.is_start()) else {
            return;
        };
        let mut consumer: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, el) in process.elements.iter().enumerate() {
            for e in el.inputs() {
                consumer.entry(e).or_default().push(i);
            }
        }
        let mut seen = vec![false; process.elements.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            for e in process.elements[i].outputs() {
                for &j in consumer.get(e).into_iter().flatten() {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        for (i, el) in process.elements.iter().enumerate() {
            if !seen[i] {
                let path = format!("{pool}/{}", base.child(i, el.kind_name()));
                self.push(
                    DiagnosticKind::UnreachableElement,
                    path,
                    "element is not reachable from the start event",
                );
            }
        }
    }

    fn edges(&mut self) {
        let occurrences = std::mem::take(&mut self.occurrences);
        for (name, occ) in &occurrences {
            let first = &occ[0];
            if let Some(other) = occ.iter().find(|o| o.kind != first.kind) {
                self.push(
                    DiagnosticKind::EdgeKindConflict(name.clone()),
                    &other.path,
                    format!("edge `{name}` is used both as {} and {}", first.kind, other.kind),
                );
                continue;
            }
            let producers: Vec<_> = occ.iter().filter(|o| o.role == SlotRole::Output).collect();
            let consumers: Vec<_> = occ.iter().filter(|o| o.role == SlotRole::Input).collect();
            if producers.len() > 1 {
                self.push(
                    DiagnosticKind::DuplicateEdgeSource(name.clone()),
                    &producers[1].path,
                    format!("edge `{name}` is produced by {} elements", producers.len()),
                );
            }
            if consumers.len() > 1 {
                self.push(
                    DiagnosticKind::DuplicateEdgeTarget(name.clone()),
                    &consumers[1].path,
                    format!("edge `{name}` is consumed by {} elements", consumers.len()),
                );
            }
            if first.kind == EdgeKind::Normal {
                if producers.is_empty() {
                    self.push(
                        DiagnosticKind::MissingEdgeSource(name.clone()),
                        &consumers[0].path,
                        format!("edge `{name}` has no source element"),
                    );
                }
                if consumers.is_empty() {
                    self.push(
                        DiagnosticKind::MissingEdgeTarget(name.clone()),
                        &producers[0].path,
                        format!("edge `{name}` has no target element"),
                    );
                }
                if producers.len() == 1
                    && consumers.len() == 1
                    && producers[0].scope != consumers[0].scope
                {
                    self.push(
                        DiagnosticKind::EdgeCrossesScope(name.clone()),
                        &consumers[0].path,
                        format!("edge `{name}` connects elements of different scopes"),
                    );
                }
            }
        }
    }

    fn messages(&mut self) {
        let names: BTreeSet<String> =
            self.sends.keys().chain(self.receives.keys()).cloned().collect();
        let empty = BTreeSet::new();
        for m in names {
            let senders = self.sends.get(&m).unwrap_or(&empty);
            let receivers = self.receives.get(&m).unwrap_or(&empty);
            // Each receiving pool needs a sender elsewhere, and vice versa.
            let recv_ok = receivers.iter().all(|r| senders.iter().any(|s| s != r));
            let send_ok = senders.iter().all(|s| receivers.iter().any(|r| r != s));
            if !(recv_ok && send_ok) {
                let path = self.first_message_use[&m].clone();
                self.push(
                    DiagnosticKind::UnmatchedMessage(m.clone()),
                    path,
                    format!("message `{m}` has no counterpart in another pool"),
                );
            }
        }
    }
}

/// Checks every well-formedness rule of a collaboration. The result is
/// empty exactly when the model is well-formed; warnings do not make a
/// model ill-formed but are reported alongside errors.
pub fn validate(model: &Collaboration) -> Vec<Diagnostic> {
    let mut c = Collector::default();
    if model.pools.is_empty() {
        c.push(DiagnosticKind::EmptyCollaboration, "", "collaboration has no pools");
    }
    let mut seen = BTreeSet::new();
    for (i, pool) in model.pools.iter().enumerate() {
        c.check_name(&pool.name, &pool.name);
        if !seen.insert(pool.name.as_str()) {
            c.push(
                DiagnosticKind::DuplicatePool(pool.name.clone()),
                &pool.name,
                format!("pool `{}` is declared twice", pool.name),
            );
        }
        c.scope(i, &pool.name, &pool.process, &ElementPath::root());
    }
    c.edges();
    c.messages();
    c.diags
}

/// Validates a single process in isolation: scope and edge rules only,
/// message pairing is not checked.
pub fn validate_process(name: &str, process: &Process) -> Vec<Diagnostic> {
    let mut c = Collector::default();
    c.scope(0, name, process, &ElementPath::root());
    c.edges();
    c.diags
}
