use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::{json, Value as Json};

use super::{
    collaboration_good, eventually_good, explore, safeness, AnalysisError, ExplorationBounds, Value,
    Verdict,
};
use crate::model::Collaboration;
use crate::semantics::Net;
use crate::structure::is_well_structured_process;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolVerdicts {
    pub name: String,
    pub ws: Verdict,
    pub safe: Verdict,
    pub sound: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollabVerdicts {
    pub ws: Verdict,
    pub safe: Verdict,
    pub sound: Verdict,
    pub mr_sound: Verdict,
}

/// Raw verdicts of one model, before any cross-checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assessment {
    pub pools: Vec<PoolVerdicts>,
    pub collaboration: CollabVerdicts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub pools: Vec<PoolVerdicts>,
    pub collaboration: CollabVerdicts,
    pub region: String,
    pub bounds: ExplorationBounds,
    pub saturated: bool,
}

fn state_cap_verdicts(e: &AnalysisError) -> (Verdict, Verdict) {
    (Verdict::inconclusive(false, e.to_string()), Verdict::inconclusive(false, e.to_string()))
}

/// Runs every checker once per pool and once for the collaboration.
pub fn assess(model: &Collaboration, bounds: &ExplorationBounds) -> Assessment {
    let mut pools = Vec::new();
    for pool in &model.pools {
        let ws = Verdict::from_bool(is_well_structured_process(&pool.process).well_structured);
        let net = Net::process(&pool.name, &pool.process);
        let (safe, sound) = match explore(&net, bounds) {
            Ok(lts) => (safeness(&net, &lts), eventually_good(&net, &lts, |c| net.is_cs_sound(0, c))),
            Err(e) => state_cap_verdicts(&e),
        };
        pools.push(PoolVerdicts { name: pool.name.clone(), ws, safe, sound });
    }
    let ws = Verdict::from_bool(pools.iter().all(|p| p.ws.is_holds()));
    let net = Net::collaboration(model);
    let (safe, sound, mr_sound) = match explore(&net, bounds) {
        Ok(lts) => (
            safeness(&net, &lts),
            eventually_good(&net, &lts, |c| collaboration_good(&net, c, true)),
            eventually_good(&net, &lts, |c| collaboration_good(&net, c, false)),
        ),
        Err(e) => {
            let (a, b) = state_cap_verdicts(&e);
            (a, b.clone(), b)
        }
    };
    Assessment { pools, collaboration: CollabVerdicts { ws, safe, sound, mr_sound } }
}

impl Assessment {
    /// Implications between definitive verdicts that must never fail.
    pub fn inconsistencies(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.pools {
            if p.ws.is_holds() && p.safe.is_violated() {
                out.push(format!("pool {} is well-structured but unsafe", p.name));
            }
            if p.ws.is_holds() && p.sound.is_violated() {
                out.push(format!("pool {} is well-structured but unsound", p.name));
            }
        }
        let c = &self.collaboration;
        if c.ws.is_holds() && c.safe.is_violated() {
            out.push("collaboration is well-structured but unsafe".into());
        }
        if self.pools.iter().all(|p| p.safe.is_holds()) && c.safe.is_violated() {
            out.push("all pools are safe but the collaboration is unsafe".into());
        }
        if self.pools.iter().any(|p| p.sound.is_violated()) && c.sound.is_holds() {
            out.push("a pool is unsound but the collaboration is sound".into());
        }
        if c.sound.is_holds() && c.mr_sound.is_violated() {
            out.push("collaboration is sound but not message-relaxed sound".into());
        }
        out
    }

    fn all_verdicts(&self) -> Vec<&Verdict> {
        let c = &self.collaboration;
        let mut v = vec![&c.safe, &c.sound, &c.mr_sound];
        for p in &self.pools {
            v.push(&p.safe);
            v.push(&p.sound);
        }
        v
    }
}

fn region(c: &CollabVerdicts) -> String {
    let parts = [
        (&c.ws, "ws", "not-ws"),
        (&c.safe, "safe", "unsafe"),
        (&c.sound, "sound", "unsound"),
        (&c.mr_sound, "mr-sound", "mr-unsound"),
    ];
    if parts.iter().any(|(v, _, _)| v.value == Value::Inconclusive) {
        return "undetermined".into();
    }
    parts
        .iter()
        .map(|(v, yes, no)| if v.is_holds() { *yes } else { *no })
        .collect::<Vec<_>>()
        .join("/")
}

/// Assesses a model and names its region of the classification.
pub fn classify(model: &Collaboration, bounds: &ExplorationBounds) -> Result<ClassificationReport, AnalysisError> {
    let a = assess(model, bounds);
    let problems = a.inconsistencies();
    if !problems.is_empty() {
        return Err(AnalysisError::InternalInconsistency(problems.join("; ")));
    }
    let saturated = a.all_verdicts().iter().any(|v| v.saturated);
    Ok(ClassificationReport {
        region: region(&a.collaboration),
        pools: a.pools,
        collaboration: a.collaboration,
        bounds: *bounds,
        saturated,
    })
}

impl ClassificationReport {
    /// Witness traces keyed by `<scope>.<property>`.
    pub fn witnesses(&self) -> BTreeMap<String, Vec<String>> {
        let mut out = BTreeMap::new();
        let mut add = |key: String, v: &Verdict| {
            if let Some(w) = &v.witness {
                out.insert(key, w.lines());
            }
        };
        for p in &self.pools {
            add(format!("{}.safeness", p.name), &p.safe);
            add(format!("{}.soundness", p.name), &p.sound);
        }
        let c = &self.collaboration;
        add("collaboration.safeness".into(), &c.safe);
        add("collaboration.soundness".into(), &c.sound);
        add("collaboration.mr-soundness".into(), &c.mr_sound);
        out
    }

    pub fn to_json(&self) -> Json {
        let pools: serde_json::Map<String, Json> = self
            .pools
            .iter()
            .map(|p| {
                (p.name.clone(), json!({"ws": p.ws.value, "safe": p.safe.value, "sound": p.sound.value}))
            })
            .collect();
        let c = &self.collaboration;
        json!({
            "pools": pools,
            "collaboration": {
                "ws": c.ws.value,
                "safe": c.safe.value,
                "sound": c.sound.value,
                "mrSound": c.mr_sound.value,
            },
            "region": self.region,
            "bounds": {
                "edgeCap": self.bounds.edge_cap,
                "msgCap": self.bounds.msg_cap,
                "stateCap": self.bounds.state_cap,
            },
            "saturated": self.saturated,
            "witnesses": self.witnesses(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mark = |v: &Verdict| {
            let mut t = v.value.to_string();
            if v.saturated {
                t.push_str(" (saturated)");
            }
            t
        };
        for p in &self.pools {
            let _ = writeln!(
                s,
                "pool {}: ws={} safe={} sound={}",
                p.name,
                mark(&p.ws),
                mark(&p.safe),
                mark(&p.sound)
            );
        }
        let c = &self.collaboration;
        let _ = writeln!(
            s,
            "collaboration: ws={} safe={} sound={} mr-sound={}",
            mark(&c.ws),
            mark(&c.safe),
            mark(&c.sound),
            mark(&c.mr_sound)
        );
        let _ = writeln!(s, "region: {}", self.region);
        s
    }
}
