use pnn_core::beta::BetaSystem;
use pnn_core::construction::{
    build_construction, materialize, sample_prefix, decode_prefix, ConstructionConfig, Selector,
};
use pnn_core::Instance;

fn ternary() -> Instance {
    Instance::new(BetaSystem::integer(3).unwrap()).unwrap()
}

#[test]
fn ternary_schedule() {
    let inst = ternary();
    let c = build_construction(&inst, &ConstructionConfig::default()).unwrap();
    let n: Vec<u64> = c.stages.iter().map(|s| s.n_j).collect();
    let ell: Vec<u64> = c.stages.iter().map(|s| s.ell_0).collect();
    println!("n = {n:?}, l0 = {ell:?}, end = {}", c.total_length());
    assert_eq!(n, [1, 4, 48, 1224]);
    assert_eq!(ell, [0, 2, 18, 306]);
    assert_eq!(c.total_length(), 10098);
    assert!(c.bounds_hold());
    for s in &c.stages {
        assert!(s.bound.exact, "stage {} fell back to logarithms", s.j);
        assert!(s.certificate <= 2.0 * s.rho + 1e-12);
    }
}

#[test]
fn materialized_sets_match_summaries() {
    let inst = ternary();
    let c = build_construction(&inst, &ConstructionConfig { stages: 2, ..Default::default() }).unwrap();
    let levels = materialize(&inst, &c, 200_000).unwrap();
    assert!(levels.len() > 4);
    let records: Vec<_> = c.records().collect();
    for lv in &levels {
        let r = records.iter().find(|r| r.flat == lv.flat).unwrap();
        assert_eq!(r.len, lv.len, "length at flat index {}", lv.flat);
        assert_eq!(r.count.as_deref(), Some(lv.words.len().to_string().as_str()), "count at {}", lv.flat);
        for w in &lv.words {
            assert_eq!(w.len() as u64, lv.len);
            assert!(inst.automaton.accepts(w));
        }
    }
}

#[test]
fn sampled_prefix_round_trips() {
    let inst = ternary();
    let c = build_construction(&inst, &ConstructionConfig { stages: 3, ..Default::default() }).unwrap();
    for sel in [Selector::Deterministic, Selector::Seeded { seed: 7 }] {
        let s = sample_prefix(&inst, &c, 3, sel).unwrap();
        assert_eq!(s.word.len() as u64, c.total_length());
        assert!(inst.automaton.accepts(&s.word));
        assert_eq!(decode_prefix(&c, &s.word, &s.runs).unwrap(), s.choices);
        assert_eq!(s.checkpoints.len(), 3);
    }
}
