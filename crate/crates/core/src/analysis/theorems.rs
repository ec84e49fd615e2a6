use std::fmt;

use super::{assess, Assessment, ExplorationBounds};
use crate::model::Collaboration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    WsProcessImpliesSafe,
    WsCollabImpliesSafe,
    WsProcessImpliesSound,
    WsCollabNotSufficientForSoundness,
    UnsafeProcessCanBeSound,
    UnsafeCollabCanBeSound,
    SafeProcessesComposeSafe,
    UnsoundProcessBreaksCollab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimKind {
    /// Must hold for every model.
    Universal,
    /// Needs at least one witness model.
    Existential,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::WsProcessImpliesSafe,
        Claim::WsCollabImpliesSafe,
        Claim::WsProcessImpliesSound,
        Claim::WsCollabNotSufficientForSoundness,
        Claim::UnsafeProcessCanBeSound,
        Claim::UnsafeCollabCanBeSound,
        Claim::SafeProcessesComposeSafe,
        Claim::UnsoundProcessBreaksCollab,
    ];

    pub fn kind(self) -> ClaimKind {
        match self {
            Claim::WsCollabNotSufficientForSoundness
            | Claim::UnsafeProcessCanBeSound
            | Claim::UnsafeCollabCanBeSound => ClaimKind::Existential,
            _ => ClaimKind::Universal,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Claim::WsProcessImpliesSafe => "well-structured processes are safe",
            Claim::WsCollabImpliesSafe => "well-structured collaborations are safe",
            Claim::WsProcessImpliesSound => "well-structured processes are sound",
            Claim::WsCollabNotSufficientForSoundness => {
                "some well-structured collaboration is not (message-relaxed) sound"
            }
            Claim::UnsafeProcessCanBeSound => "some unsafe process is sound",
            Claim::UnsafeCollabCanBeSound => "some unsafe collaboration is sound",
            Claim::SafeProcessesComposeSafe => "collaborations of safe processes are safe",
            Claim::UnsoundProcessBreaksCollab => "an unsound process makes its collaboration unsound",
        }
    }

    /// For universal claims: whether `a` is a counterexample. For
    /// existential claims: whether `a` is a witness. Only definitive
    /// verdicts count.
    fn matches(self, a: &Assessment) -> bool {
        let c = &a.collaboration;
        match self {
            Claim::WsProcessImpliesSafe => a.pools.iter().any(|p| p.ws.is_holds() && p.safe.is_violated()),
            Claim::WsCollabImpliesSafe => c.ws.is_holds() && c.safe.is_violated(),
            Claim::WsProcessImpliesSound => a.pools.iter().any(|p| p.ws.is_holds() && p.sound.is_violated()),
            Claim::WsCollabNotSufficientForSoundness => {
                c.ws.is_holds() && (c.sound.is_violated() || c.mr_sound.is_violated())
            }
            Claim::UnsafeProcessCanBeSound => a.pools.iter().any(|p| p.safe.is_violated() && p.sound.is_holds()),
            Claim::UnsafeCollabCanBeSound => c.safe.is_violated() && c.sound.is_holds(),
            Claim::SafeProcessesComposeSafe => {
                a.pools.iter().all(|p| p.safe.is_holds()) && c.safe.is_violated()
            }
            Claim::UnsoundProcessBreaksCollab => {
                a.pools.iter().any(|p| p.sound.is_violated()) && c.sound.is_holds()
            }
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheckResult {
    pub claim: Claim,
    pub passed: bool,
    /// Counterexamples of a universal claim, or witnesses of an
    /// existential one.
    pub models: Vec<String>,
}

impl fmt::Display for TheoremCheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok" } else { "FAILED" };
        let what = match self.claim.kind() {
            ClaimKind::Universal => "counterexamples",
            ClaimKind::Existential => "witnesses",
        };
        write!(f, "{status} {} ({}); {what}: [{}]", self.claim, self.claim.description(), self.models.join(", "))
    }
}

/// Evaluates every claim against already computed assessments.
pub fn check_assessments(corpus: &[(String, Assessment)]) -> Vec<TheoremCheckResult> {
    Claim::ALL
        .iter()
        .map(|&claim| {
            let models: Vec<String> =
                corpus.iter().filter(|(_, a)| claim.matches(a)).map(|(n, _)| n.clone()).collect();
            let passed = match claim.kind() {
                ClaimKind::Universal => models.is_empty(),
                ClaimKind::Existential => !models.is_empty(),
            };
            TheoremCheckResult { claim, passed, models }
        })
        .collect()
}

/// Assesses every model and evaluates every claim.
pub fn check_theorems(corpus: &[(String, Collaboration)], bounds: &ExplorationBounds) -> Vec<TheoremCheckResult> {
    let assessed: Vec<(String, Assessment)> =
        corpus.iter().map(|(n, m)| (n.clone(), assess(m, bounds))).collect();
    check_assessments(&assessed)
}
