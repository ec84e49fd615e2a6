use super::*;
use crate::parser::parse;

fn model(text: &str) -> Collaboration {
    parse(text).unwrap()
}

const FIG01: &str = include_str!("../../corpus/fig01_travel_agency.bpmnc");

fn b() -> ExplorationBounds {
    ExplorationBounds::default()
}

fn pool_verdicts(text: &str, pool: usize) -> (Value, Value) {
    let m = model(text);
    let p = &m.pools[pool];
    (is_safe_process(&p.name, &p.process, &b()).value, is_sound_process(&p.name, &p.process, &b()).value)
}

#[test]
fn running_example_processes() {
    assert_eq!(pool_verdicts(FIG01, 0), (Value::Holds, Value::Holds));
    assert_eq!(pool_verdicts(FIG01, 1), (Value::Violated, Value::Holds));
}

#[test]
fn running_example_collaboration() {
    let m = model(FIG01);
    assert_eq!(is_safe_collaboration(&m, &b()).value, Value::Violated);
    let sound = is_sound_collaboration(&m, &b());
    assert_eq!(sound.value, Value::Violated);
    assert!(sound.witness.is_some());
    assert_eq!(is_mr_sound_collaboration(&m, &b()).value, Value::Holds);
}

#[test]
fn single_process_figures() {
    assert_eq!(pool_verdicts(include_str!("../../corpus/fig05.bpmnc"), 0).1, Value::Violated);
    assert_eq!(pool_verdicts(include_str!("../../corpus/fig05_terminate.bpmnc"), 0).1, Value::Holds);
    assert_eq!(pool_verdicts(include_str!("../../corpus/fig06.bpmnc"), 0).1, Value::Holds);
    assert_eq!(pool_verdicts(include_str!("../../corpus/fig16.bpmnc"), 0).1, Value::Holds);
    assert_eq!(
        pool_verdicts(include_str!("../../corpus/fig17.bpmnc"), 0),
        (Value::Violated, Value::Holds)
    );
}

fn collab(text: &str) -> (Value, Value, Value) {
    let m = model(text);
    (
        is_safe_collaboration(&m, &b()).value,
        is_sound_collaboration(&m, &b()).value,
        is_mr_sound_collaboration(&m, &b()).value,
    )
}

#[test]
fn collaboration_figures() {
    use Value::*;
    assert_eq!(collab(include_str!("../../corpus/fig12.bpmnc")).1, Violated);
    assert_eq!(collab(include_str!("../../corpus/fig12.bpmnc")).2, Violated);
    assert_eq!(collab(include_str!("../../corpus/fig13.bpmnc")), (Violated, Violated, Holds));
    assert_eq!(collab(include_str!("../../corpus/fig14.bpmnc")), (Holds, Holds, Holds));
    assert_eq!(collab(include_str!("../../corpus/fig15.bpmnc")).0, Holds);
    assert_eq!(collab(include_str!("../../corpus/fig18.bpmnc")).0, Violated);
    assert_eq!(collab(include_str!("../../corpus/fig18.bpmnc")).1, Holds);
    assert_eq!(collab(include_str!("../../corpus/ws_deadlock.bpmnc")), (Holds, Violated, Violated));
}

#[test]
fn fig05_witness_ends_stuck() {
    let m = model(include_str!("../../corpus/fig05.bpmnc"));
    let v = is_sound_process("P", &m.pools[0].process, &b());
    let w = v.witness.unwrap();
    assert_eq!(w.steps.first().unwrap().path, "start@0");
    assert!(!v.saturated);
}

#[test]
fn safeness_witness_is_shortest() {
    let m = model(include_str!("../../corpus/fig17.bpmnc"));
    let v = is_safe_process("P", &m.pools[0].process, &b());
    // start, split, both tasks, then the join fires twice.
    assert_eq!(
        v.witness.unwrap().lines(),
        vec![
            "tau | P | start@0",
            "tau | P | andSplit@1",
            "tau | P | task@2",
            "tau | P | task@3",
            "tau | P | xorJoin@4",
            "tau | P | xorJoin@4",
        ]
    );
}

#[test]
fn classify_regions() {
    let r = classify(&model(FIG01), &b()).unwrap();
    assert_eq!(r.region, "not-ws/unsafe/unsound/mr-sound");
    let r = classify(&model("pool A { start(enb:a -> b) end(b -> cmp:c) }"), &b()).unwrap();
    assert_eq!(r.region, "ws/safe/sound/mr-sound");
    assert!(!r.saturated);
    let r = classify(&model(include_str!("../../corpus/fig15.bpmnc")), &b()).unwrap();
    assert!(r.region.starts_with("not-ws/safe"));
}

#[test]
fn report_json_shape() {
    let r = classify(&model(FIG01), &b()).unwrap();
    let j = r.to_json();
    assert_eq!(j["pools"]["Customer"]["ws"], "holds");
    assert_eq!(j["pools"]["TravelAgency"]["safe"], "violated");
    assert_eq!(j["collaboration"]["mrSound"], "holds");
    assert_eq!(j["bounds"]["edgeCap"], 3);
    assert!(j["witnesses"]["collaboration.safeness"].is_array());
}

#[test]
fn inconclusive_on_state_cap() {
    let tiny = ExplorationBounds { state_cap: 5, ..b() };
    let v = is_safe_collaboration(&model(FIG01), &tiny);
    assert_eq!(v.value, Value::Inconclusive);
    let r = classify(&model(FIG01), &tiny).unwrap();
    assert_eq!(r.region, "undetermined");
}

#[test]
fn claims_over_small_corpus() {
    let only_minimal = vec![("min".to_string(), model("pool A { start(enb:a -> b) end(b -> cmp:c) }"))];
    let results = check_theorems(&only_minimal, &b());
    for r in results {
        match r.claim.kind() {
            ClaimKind::Universal => assert!(r.passed),
            ClaimKind::Existential => assert!(!r.passed),
        }
    }
}

#[test]
fn safeness_ignores_message_counts() {
    // Perturbing δ in reachable states never changes the edge maximum.
    let m = model(FIG01);
    let net = Net::collaboration(&m);
    let lts = explore(&net, &b()).unwrap();
    for c in lts.states.iter().take(500) {
        let mut d = c.clone();
        for v in d.delta.iter_mut() {
            *v += 7;
        }
        assert_eq!(net.max_marking_all(c), net.max_marking_all(&d));
    }
}
