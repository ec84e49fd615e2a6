use bpmnc::generate::{random_model, GenConfig};
use bpmnc::model::{from_json, to_json};
use bpmnc::parser::{parse, parse_unvalidated, pretty};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn pretty_then_parse_is_identity(seed in any::<u64>()) {
        let m = random_model(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::default());
        let text = pretty(&m);
        prop_assert_eq!(parse(&text).unwrap(), m.clone());
        prop_assert_eq!(pretty(&parse(&text).unwrap()), text);
        prop_assert_eq!(from_json(&to_json(&m)).unwrap(), m);
    }

    #[test]
    fn parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse(&String::from_utf8_lossy(&bytes));
    }

    #[test]
    fn parser_never_panics_on_near_miss(text in "(pool|[A-Za-z]{1,3}|[{}(),:]|->|\\|\\||//[a-z]*\n|[ \n]){0,60}") {
        let _ = parse_unvalidated(&text);
        let _ = parse(&text);
    }
}
