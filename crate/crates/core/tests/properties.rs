use num_bigint::BigUint;
use num_rational::BigRational;
use pnn_core::analysis::frequency_trace;
use pnn_core::beta::{beta_expand, build_automaton, evaluate_digits, is_admissible, BetaSystem};
use pnn_core::construction::Tally;
use pnn_core::measures::{information_function, parry_measure};
use pnn_core::shift::{empirical, shift, Alphabet, CylinderMeasure, Word};
use pnn_core::specification::{build_gluing_table, glue, glue_chain};
use proptest::prelude::*;
use std::sync::OnceLock;

fn silver() -> &'static BetaSystem {
    static S: OnceLock<BetaSystem> = OnceLock::new();
    S.get_or_init(BetaSystem::silver)
}

fn golden() -> &'static BetaSystem {
    static S: OnceLock<BetaSystem> = OnceLock::new();
    S.get_or_init(BetaSystem::golden)
}

fn letters(n: u8, max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..n, 0..max)
}

/// An admissible word drawn by walking the automaton.
fn admissible_word(sys: &'static BetaSystem, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<u8>(), 0..max).prop_map(move |choices| {
        let aut = build_automaton(sys).unwrap();
        let mut state = aut.initial();
        let mut w = Word::new();
        for c in choices {
            let options: Vec<u8> = aut.alphabet().letters().filter(|&a| aut.step(state, a).is_some()).collect();
            let a = options[c as usize % options.len()];
            state = aut.step(state, a).unwrap();
            w.push(a);
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn automaton_matches_lexicographic_rule(w in letters(3, 40)) {
        for sys in [silver(), golden()] {
            let aut = build_automaton(sys).unwrap();
            let ok = sys.alphabet().check(&w).is_ok();
            let direct = is_admissible(&w, sys).unwrap();
            prop_assert_eq!(aut.accepts(&w), ok && direct);
        }
    }

    #[test]
    fn factors_of_admissible_words_are_admissible(w in admissible_word(silver(), 40), k in 0usize..40) {
        let k = k.min(w.len());
        prop_assert!(is_admissible(&shift(&w, k).unwrap(), silver()).unwrap());
        prop_assert!(is_admissible(&w.prefix(w.len() - k).unwrap(), silver()).unwrap());
    }

    #[test]
    fn expansions_are_admissible_and_close(num in 0u32..1000, den in 1u32..1000, n in 1usize..24) {
        prop_assume!(num < den);
        let x = BigRational::new(num.into(), den.into());
        for sys in [silver(), &BetaSystem::integer(3).unwrap()] {
            let d = beta_expand(&x, sys, n).unwrap();
            prop_assert_eq!(d.len(), n);
            prop_assert!(is_admissible(&d, sys).unwrap());
            let r = num as f64 / den as f64 - evaluate_digits(&d, sys.beta());
            prop_assert!(r >= -1e-12 && r <= sys.beta().powi(-(n as i32)) + 1e-12);
        }
    }

    #[test]
    fn glued_words_are_admissible(a in admissible_word(silver(), 20), b in admissible_word(silver(), 20)) {
        let aut = build_automaton(silver()).unwrap();
        let table = build_gluing_table(&aut).unwrap();
        let g = glue(&a, &b, &table).unwrap();
        prop_assert!(aut.accepts(&g));
        prop_assert!(g.len() - a.len() - b.len() <= table.constant());
        prop_assert!(g.starts_with(&a) && g.ends_with(&b));
    }

    #[test]
    fn chains_record_their_connectors(ws in prop::collection::vec(admissible_word(golden(), 8), 1..6)) {
        let aut = build_automaton(golden()).unwrap();
        let table = build_gluing_table(&aut).unwrap();
        let (g, conns) = glue_chain(&ws, &table).unwrap();
        prop_assert!(aut.accepts(&g));
        let total: usize = ws.iter().map(|w| w.len()).sum::<usize>() + conns.iter().sum::<usize>();
        prop_assert_eq!(g.len(), total);
    }

    #[test]
    fn parry_mass_is_additive_and_invariant(w in admissible_word(silver(), 12)) {
        let nu = parry_measure(silver()).unwrap();
        let m = nu.mass(&w);
        let right: f64 = (0..3).map(|a| nu.mass(&w.concat(&[a]))).sum();
        let left: f64 = (0..3).map(|a| nu.mass(&[&[a][..], &w[..]].concat())).sum();
        prop_assert!((right - m).abs() <= 1e-12);
        prop_assert!((left - m).abs() <= 1e-12);
        prop_assert!((nu.mass_by_density(&w) - m).abs() <= 1e-12);
    }

    #[test]
    fn information_average_dominates_its_floor(w in admissible_word(silver(), 30)) {
        prop_assume!(!w.is_empty());
        let nu = parry_measure(silver()).unwrap();
        let info = information_function(&nu).unwrap();
        let v = info.values(&w).unwrap();
        prop_assert!(v.iter().all(|&x| x >= info.lower_bound() - 1e-12));
    }

    #[test]
    fn empirical_counts_add_up(w in letters(3, 60), k in 1usize..4) {
        prop_assume!(w.len() >= k);
        let e = empirical(&w, Alphabet::new(3).unwrap(), k).unwrap();
        let total: u64 = e.blocks().filter(|(b, _)| b.len() == k).map(|(_, c)| c).sum();
        prop_assert_eq!(total, (w.len() - k + 1) as u64);
    }

    #[test]
    fn trace_counts_match_a_scan(w in letters(3, 300), d in 0u8..3) {
        prop_assume!(!w.is_empty());
        let t = frequency_trace(&w, d).unwrap();
        let mut c = 0;
        for (m, &a) in w.iter().enumerate() {
            c += u64::from(a == d);
            prop_assert_eq!(t.count(m as u64 + 1), c);
        }
    }

    #[test]
    fn tallies_follow_integer_arithmetic(a in 1u64..1 << 40, b in 1u64..1 << 40, c in 1u64..1 << 40) {
        let (ta, tb, tc) = (Tally::from_u64(a), Tally::from_u64(b), Tally::from_u64(c));
        let exact = BigUint::from(a) * BigUint::from(b) + BigUint::from(c);
        let t = ta.mul(&tb, 1 << 16).add(&tc, 1 << 16);
        prop_assert_eq!(t.exact(), Some(&exact));
        let approx = ta.mul(&tb, 8).add(&tc, 8);
        prop_assert!(!approx.is_exact());
        prop_assert!((approx.ln() - t.ln()).abs() <= 1e-9 * t.ln());
    }
}
