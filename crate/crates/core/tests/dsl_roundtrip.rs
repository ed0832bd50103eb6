use fmkit::corpus::{lte_advanced_model, stub_legacy_model, LTE_ADVANCED_SOURCE};
use fmkit::testkit::{random_model, rng, GenParams};
use fmkit::{parse_model, serialize_model};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parse_inverts_serialize(seed in any::<u64>()) {
        let m = random_model(&mut rng(seed), GenParams::new(30, 4));
        let text = serialize_model(&m);
        let back = parse_model(&text).unwrap();
        prop_assert!(back.structurally_eq(&m), "{}", text);
        prop_assert_eq!(serialize_model(&back), text);
    }
}

#[test]
fn corpus_round_trips() {
    for m in [lte_advanced_model(), stub_legacy_model()] {
        let text = serialize_model(&m);
        let back = parse_model(&text).unwrap();
        assert!(back.structurally_eq(&m));
        assert_eq!(serialize_model(&back), text);
    }
}

#[test]
fn corpus_source_is_not_canonical_but_normalizes() {
    // the shipped file has rationale comments, the canonical form does not
    let canonical = serialize_model(&lte_advanced_model());
    assert_ne!(canonical, LTE_ADVANCED_SOURCE);
    assert!(!canonical.contains("//"));
    assert_eq!(
        serialize_model(&parse_model(&canonical).unwrap()),
        canonical
    );
}
