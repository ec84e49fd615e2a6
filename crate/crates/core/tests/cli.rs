use std::process::Command;

use bpmnc::cli::run;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}.bpmnc")
}

fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut argv = vec!["bpmnc".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn classify_running_example_json() {
    let (code, out, _) = call(&["classify", &fixture("fig01_travel_agency"), "--format", "json"], "");
    assert_eq!(code, 0);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["region"], "not-ws/unsafe/unsound/mr-sound");
    assert_eq!(j["collaboration"]["ws"], "violated");
    assert_eq!(j["collaboration"]["safe"], "violated");
    assert_eq!(j["collaboration"]["sound"], "violated");
    assert_eq!(j["collaboration"]["mrSound"], "holds");
    assert_eq!(j["pools"]["Customer"]["sound"], "holds");
    assert_eq!(j["pools"]["TravelAgency"]["safe"], "violated");
}

#[test]
fn check_exit_codes() {
    let (code, out, _) = call(&["check", "--property", "safeness", &fixture("fig15")], "");
    assert_eq!((code, out.lines().next().unwrap()), (0, "safeness: holds"));
    let (code, out, _) = call(&["check", "--property", "soundness", &fixture("fig05")], "");
    assert_eq!(code, 1);
    assert!(out.starts_with("soundness: violated\nwitness:\n  tau | P | start@0\n"));
    let (code, _, err) =
        call(&["check", "--property", "safeness", "--state-cap", "3", &fixture("fig01_travel_agency")], "");
    assert_eq!(code, 2, "{err}");
}

#[test]
fn fig05_witness_ends_stuck_and_unsound() {
    use bpmnc::parser::parse;
    use bpmnc::semantics::Net;
    let (_, out, _) = call(&["trace", "--property", "soundness", "--pool", "P", &fixture("fig05")], "");
    let model = parse(&std::fs::read_to_string(fixture("fig05")).unwrap()).unwrap();
    let net = Net::process("P", &model.pools[0].process);
    let mut c = net.initial();
    for line in out.lines() {
        let path = line.rsplit(" | ").next().unwrap();
        let step = net
            .steps(&c)
            .into_iter()
            .find(|s| net.trace_step(s.rule).path == path && net.trace_step(s.rule).to_string() == line)
            .unwrap_or_else(|| panic!("step {line} not enabled"));
        c = step.target;
    }
    assert!(net.steps(&c).is_empty());
    assert!(!net.is_cs_sound(0, &c));
}

#[test]
fn trace_without_witness() {
    let (code, out, _) = call(&["trace", "--property", "safeness", &fixture("fig15")], "");
    assert_eq!((code, out.as_str()), (0, "no witness\n"));
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(call(&["frobnicate"], "").0, 64);
    assert_eq!(call(&["check", "--property", "liveness", "-"], "").0, 64);
    assert_eq!(call(&["classify", "--edge-cap", "0", "-"], "").0, 64);
    assert_eq!(call(&["--help"], "").0, 0);
    let (code, _, err) = call(&["classify", "-"], "pool A { start(enb:a -> b) end(b cmp:c) }");
    assert_eq!(code, 65);
    assert!(err.contains("syntax error at 1:"), "{err}");
    let (code, _, err) = call(&["classify", "-"], "pool A { start(enb:a -> b) end(x -> cmp:c) }");
    assert_eq!(code, 65);
    assert!(err.contains("invalid model"), "{err}");
    assert_eq!(call(&["check", "--property", "ws", "--pool", "Nope", &fixture("fig15")], "").0, 64);
}

#[test]
fn fmt_is_idempotent_and_json_roundtrips() {
    let (code, once, _) = call(&["fmt", &fixture("fig01_travel_agency")], "");
    assert_eq!(code, 0);
    let (_, twice, _) = call(&["fmt", "-"], &once);
    assert_eq!(once, twice);
    let (_, json, _) = call(&["fmt", "--format", "json", "-"], &once);
    let (_, back, _) = call(&["fmt", "-"], &json);
    assert_eq!(back, once);
}

#[test]
fn explore_outputs() {
    let (code, out, _) = call(&["explore", "-"], "pool A { start(enb:a -> b) end(b -> cmp:c) }");
    assert_eq!(code, 0);
    assert_eq!(out, "states: 3\narcs: 2\ntruncated: 0\nsaturated: false\n");
    let (_, dot, _) = call(&["explore", "--format", "dot", "-"], "pool A { start(enb:a -> b) end(b -> cmp:c) }");
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("doublecircle"));
}

#[test]
fn ws_check_explains_reduction() {
    let (code, out, _) = call(&["check", "--property", "ws", "--explain", "--pool", "Customer", &fixture("fig01_travel_agency")], "");
    assert_eq!(code, 0);
    assert!(out.contains("pool Customer:"));
    let (code, _, _) = call(&["check", "--property", "ws", &fixture("fig01_travel_agency")], "");
    assert_eq!(code, 1);
}

#[test]
fn corpus_command_passes() {
    let (code, out, _) = call(&["corpus"], "");
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("DRIFT"));
    assert!(!out.contains("FAILED"));
}

#[test]
fn binary_is_deterministic_and_colors_on_request() {
    let bin = env!("CARGO_BIN_EXE_bpmnc");
    let runit = |color: &str| {
        Command::new(bin)
            .args(["classify", &fixture("fig13")])
            .env("BPMNC_COLOR", color)
            .output()
            .unwrap()
    };
    let (a, b) = (runit("0"), runit("0"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains('\x1b'));
    assert!(String::from_utf8_lossy(&runit("1").stdout).contains("\x1b[32mholds"));
}
