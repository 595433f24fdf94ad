use pnn_core::analysis::*;
use pnn_core::beta::BetaSystem;
use pnn_core::construction::{build_construction, materialize, sample_prefix, ConstructionConfig, Selector};
use pnn_core::shift::{empirical, CylinderMeasure};
use pnn_core::Instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(p: u32, stages: u32) -> ConstructionConfig {
    ConstructionConfig { p, stages, ..Default::default() }
}

#[test]
fn trace_matches_empirical_at_checkpoints() {
    let inst = Instance::new(BetaSystem::integer(3).unwrap()).unwrap();
    let c = build_construction(&inst, &config(1, 4)).unwrap();
    let s = sample_prefix(&inst, &c, 4, Selector::Deterministic).unwrap();
    let t = frequency_trace(&s.word, 2).unwrap().with_checkpoints(&s.checkpoints);
    for cp in t.checkpoints() {
        for m in [cp.fixed_end, cp.stage_end] {
            let e = empirical(&s.word[..m as usize], inst.automaton.alphabet(), 1).unwrap();
            assert_eq!(t.count(m), e.count(&[2]));
        }
    }
}

#[test]
fn ledger_on_the_ternary_shift() {
    let inst = Instance::new(BetaSystem::integer(3).unwrap()).unwrap();
    let c = build_construction(&inst, &config(1, 4)).unwrap();
    let l = dimension_ledger(&c, &inst.nu).unwrap();
    assert!(l.monotone());
    assert_eq!(l.get(0).unwrap().y.as_deref(), Some("1/3^0"));
    let h = 3f64.ln();
    let mut sum = 0.0;
    for s in &c.stages {
        sum += (s.n_j * s.j as u64) as f64 * (h - s.eta);
        let end = l.get(s.flat_start + s.width()).unwrap();
        assert!((end.log_e - c.config.p as f64 * sum).abs() < 1e-9 * sum.max(1.0));
        assert_eq!(end.y.as_deref(), Some(format!("1/3^{}", s.ell_end).as_str()));
    }
}

#[test]
fn degenerate_depth_is_in_range() {
    let inst = Instance::new(BetaSystem::integer(3).unwrap()).unwrap();
    let c = build_construction(&inst, &config(1, 2)).unwrap();
    let d = dimension_estimate(&c, 1).unwrap();
    assert!((0.0..=1.0).contains(&d.s_star));
    assert!(dimension_estimate(&c, 3).is_err());
}

#[test]
fn block_set_cover_sums() {
    let inst = Instance::new(BetaSystem::integer(3).unwrap()).unwrap();
    let c = build_construction(&inst, &config(1, 2)).unwrap();
    let levels = materialize(&inst, &c, 1 << 20).unwrap();
    let deepest = &levels.last().unwrap().words;
    let ledger = dimension_ledger(&c, &inst.nu).unwrap();
    for lv in &levels[1..] {
        let total = cover_sum(&lv.words, 1.0, &inst.nu, deepest).unwrap();
        assert!(total <= 1.0 + 1e-12);
        let s = 0.45;
        let got = log_cover_sum(&lv.words, s, &inst.nu, deepest).unwrap();
        let closed = (lv.words.len() as f64).ln() - s * lv.len as f64 * 3f64.ln();
        assert!((got - closed).abs() < 1e-9 * closed.abs().max(1.0));
        assert!(cover_bound(&ledger, &lv.words, s, &inst.nu, deepest).unwrap().ok);
    }
    let partial = &levels[2].words[1..];
    assert!(cover_sum(partial, 0.5, &inst.nu, deepest).is_err());
}

fn random_covers(inst: &Instance, p: u32, stages: u32, s_values: &[f64]) {
    let c = build_construction(inst, &config(p, stages)).unwrap();
    let levels = materialize(inst, &c, 1 << 18).unwrap();
    let ledger = dimension_ledger(&c, &inst.nu).unwrap();
    let deepest = &levels.last().unwrap().words;
    let mut rng = ChaCha8Rng::seed_from_u64(2024 + p as u64);
    for _ in 0..100 {
        let cover = random_cover(&levels, &mut rng);
        for &s in s_values {
            let r = cover_bound(&ledger, &cover, s, &inst.nu, deepest).unwrap();
            assert!(r.ok, "{r:?}");
        }
    }
}

#[test]
fn random_covers_ternary() {
    let inst = Instance::new(BetaSystem::integer(3).unwrap()).unwrap();
    random_covers(&inst, 1, 2, &[0.3, 0.45]);
    random_covers(&inst, 2, 2, &[0.3, 0.6]);
}

#[test]
fn random_covers_silver() {
    let inst = Instance::new(BetaSystem::silver()).unwrap();
    random_covers(&inst, 1, 2, &[0.3, 0.45]);
}

#[test]
fn connectors_are_negligible() {
    let inst = Instance::new(BetaSystem::silver()).unwrap();
    let c = build_construction(&inst, &config(1, 4)).unwrap();
    let s = sample_prefix(&inst, &c, 4, Selector::Seeded { seed: 3 }).unwrap();
    let chk = connector_negligibility(&s, &c);
    assert!(chk.checked > 0);
    assert_eq!(chk.violations, 0);
}

#[test]
fn ratios_approach_their_limits() {
    let inst = Instance::new(BetaSystem::integer(3).unwrap()).unwrap();
    for p in 1..=3 {
        let c = build_construction(&inst, &config(p, 4)).unwrap();
        let q = p as f64 / (p as f64 + 1.0);
        let fixed: Vec<f64> = c.stages.iter().map(|s| (s.ratio_fixed - (1.0 - q)).abs()).collect();
        let gamma: Vec<f64> = c.stages.iter().map(|s| (s.ratio_gamma - q).abs()).collect();
        println!("p={p} fixed {fixed:?} gamma {gamma:?}");
        assert!(fixed[1..].windows(2).all(|w| w[1] <= w[0]));
        assert!(gamma[1..].windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn certificates_hold_at_every_stage() {
    for inst in [Instance::new(BetaSystem::integer(3).unwrap()).unwrap(), Instance::new(BetaSystem::silver()).unwrap()] {
        let c = build_construction(&inst, &config(1, 4)).unwrap();
        let s = sample_prefix(&inst, &c, 4, Selector::Deterministic).unwrap();
        let d = c.pair.convergent;
        let target = inst.nu.mass(&[d]);
        let t = frequency_trace(&s.word, d).unwrap();
        for st in &c.stages {
            assert!((t.value_f64(st.ell_nj) - target).abs() <= 2.0 * st.rho + 1e-12, "stage {}", st.j);
        }
    }
}
