use toughham::harness::{replay, run_lemma_suite, tightness_search, HarnessError, LemmaId, Params, SCHEMA_VERSION};
use toughham::Rational;

#[test]
fn every_id_and_alias_parses() {
    for id in [
        "2.1",
        "2.2",
        "2.3",
        "cor2.4",
        "result10",
        "2.5",
        "result5",
        "2.6",
        "pathcover",
        "result9",
        "result4",
        "2.8",
        "dirac",
        "result2",
        "result11",
        "2.7",
        "result13",
        "CE",
        "result7",
        "deficiency-split-maximality",
    ] {
        assert!(id.parse::<LemmaId>().is_ok(), "{id}");
    }
    assert!(matches!("2.99".parse::<LemmaId>(), Err(HarnessError::UnknownLemma(_))));
    assert_eq!(LemmaId::ALL.len(), 13);
}

#[test]
fn report_json_carries_the_schema_and_config() {
    let mut cfg = LemmaId::StarMatching.default_config(5);
    cfg.budget = Some(50);
    let r = run_lemma_suite(LemmaId::StarMatching, &cfg).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["lemma_id"], "2.2");
    assert_eq!(v["seed"], 5);
    assert_eq!(v["instances_sourced"], 50);
    assert!(v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn same_seed_same_report() {
    for lemma in [LemmaId::GeneralizedMatching, LemmaId::Insertion, LemmaId::DeficiencySplit] {
        let mut cfg = lemma.default_config(11);
        cfg.budget = Some(40);
        let mut a = run_lemma_suite(lemma, &cfg).unwrap();
        let mut b = run_lemma_suite(lemma, &cfg).unwrap();
        a.runtime_seconds = 0.0;
        b.runtime_seconds = 0.0;
        assert_eq!(a, b, "{lemma:?}");
    }
}

#[test]
fn enumeration_size_is_refused() {
    let mut cfg = LemmaId::CutsetStructure.default_config(0);
    cfg.n_max = 12;
    assert!(matches!(run_lemma_suite(LemmaId::CutsetStructure, &cfg), Err(HarnessError::TooLarge(12, _))));
}

#[test]
fn path_cover_violations_replay() {
    let mut cfg = LemmaId::PathCover.default_config(0);
    cfg.n_max = 6;
    let r = run_lemma_suite(LemmaId::PathCover, &cfg).unwrap();
    assert_eq!(r.violations.len(), 1);
    let v = &r.violations[0];
    assert_eq!(v.graph6, "E@UW");
    assert!(replay(LemmaId::PathCover, &v.graph6, &v.params, &v.clause).unwrap());
    assert!(!replay(LemmaId::PathCover, "Bw", &Params::Graph, &v.clause).unwrap());
}

#[test]
fn tightness_search_is_seeded() {
    let a = tightness_search(Rational::int(15), 9, 300, 3).unwrap();
    let b = tightness_search(Rational::int(15), 9, 300, 3).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.counterexamples.is_empty());
    assert!(a.records.iter().all(|r| !r.hamiltonian && r.tau < Rational::int(15)));
    assert!(matches!(tightness_search(Rational::int(15), 40, 1, 0), Err(HarnessError::TooLarge(40, _))));
}
