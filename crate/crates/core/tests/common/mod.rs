//! Helpers shared by the integration tests.

#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;

use bpmnc::analysis::{explore, ExplorationBounds};
use bpmnc::generate::{random_model, GenConfig};
use bpmnc::model::Collaboration;
use bpmnc::semantics::{marking, Configuration, Net};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oracle::State;

/// Named, zero-free view of a configuration, comparable with oracle states.
pub fn to_state(net: &Net, c: &Configuration) -> State {
    let sigma: BTreeMap<String, u64> =
        marking(net, c).into_iter().filter(|(_, v)| *v > 0).map(|(k, v)| (k, u64::from(v))).collect();
    let delta = net
        .messages
        .iter()
        .zip(&c.delta)
        .filter(|(_, v)| **v > 0)
        .map(|(m, &v)| (m.clone(), u64::from(v)))
        .collect();
    State { sigma, delta }
}

/// Inverse of [`to_state`].
pub fn from_state(net: &Net, s: &State) -> Configuration {
    let mut c = net.zero();
    for (k, &v) in &s.sigma {
        c.sigma[net.edge(k).expect("unknown edge")] = u32::try_from(v).unwrap();
    }
    for (k, &v) in &s.delta {
        c.delta[net.message(k).expect("unknown message")] = u32::try_from(v).unwrap();
    }
    c
}

/// Whether every net of `m` (each pool and the collaboration) explores
/// within `cap` abstract states.
pub fn explorable(m: &Collaboration, cap: usize) -> bool {
    let bounds = ExplorationBounds { state_cap: cap, ..ExplorationBounds::default() };
    m.pools.iter().all(|p| explore(&Net::process(&p.name, &p.process), &bounds).is_ok())
        && explore(&Net::collaboration(m), &bounds).is_ok()
}

/// `n` random models drawn from `seed`, keeping only those accepted by
/// `keep`.
pub fn sample(seed: u64, n: usize, keep: impl Fn(&Collaboration) -> bool) -> Vec<Collaboration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = GenConfig::default();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        assert!(tries < n * 50, "sampler could not find {n} models");
        let m = random_model(&mut rng, &cfg);
        if keep(&m) {
            out.push(m);
        }
    }
    out
}
