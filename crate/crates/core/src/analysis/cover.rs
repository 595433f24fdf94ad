use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ledger::DimensionLedger;
use crate::construction::Level;
use crate::error::{domain_err, Result};
use crate::measures::ParryMeasure;
use crate::shift::Word;

/// Fails unless every word of `deepest` has a prefix in `cover`.
pub fn check_cover(cover: &[Word], deepest: &[Word]) -> Result<()> {
    let set: HashSet<&[u8]> = cover.iter().map(|w| w.letters()).collect();
    let lens: BTreeSet<usize> = cover.iter().map(|w| w.len()).collect();
    for x in deepest {
        if !lens.iter().any(|&l| l <= x.len() && set.contains(&x[..l])) {
            return Err(domain_err!("{x} has no prefix in the cover"));
        }
    }
    Ok(())
}

/// `log sum_{w in cover} nu([w])^s`, after checking that the cover covers
/// `deepest`.
pub fn log_cover_sum(cover: &[Word], s: f64, nu: &ParryMeasure, deepest: &[Word]) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(domain_err!("s = {s} outside (0, 1]"));
    }
    check_cover(cover, deepest)?;
    let logs: Vec<f64> = cover.par_iter().map(|w| s * nu.log_mass(w)).collect();
    if let Some(w) = cover.iter().zip(&logs).find(|(_, l)| l.is_infinite()).map(|(w, _)| w) {
        return Err(domain_err!("cover element {w} is not admissible"));
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln())
}

pub fn cover_sum(cover: &[Word], s: f64, nu: &ParryMeasure, deepest: &[Word]) -> Result<f64> {
    log_cover_sum(cover, s, nu, deepest).map(f64::exp)
}

/// One cover tested against `sum >= E_n y_{n+1}^s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub size: usize,
    pub s: f64,
    pub log_sum: f64,
    /// Largest `N` with `nu([w]) < y_N` for every cover element.
    pub big_n: u64,
    /// Smallest `n >= N` meeting the bound.
    pub witness: Option<u64>,
    pub ok: bool,
}

/// Looks for `n >= N` with `sum >= E_n y_{n+1}^s` among the ledger indices.
pub fn cover_bound(
    ledger: &DimensionLedger,
    cover: &[Word],
    s: f64,
    nu: &ParryMeasure,
    deepest: &[Word],
) -> Result<CoverRecord> {
    let log_sum = log_cover_sum(cover, s, nu, deepest)?;
    let heaviest = cover.iter().map(|w| nu.log_mass(w)).fold(f64::NEG_INFINITY, f64::max);
    let big_n = ledger.entries.iter().take_while(|e| heaviest < e.log_y).last().map_or(0, |e| e.n);
    let witness = ledger
        .entries
        .windows(2)
        .filter(|w| w[0].n >= big_n && w[1].n == w[0].n + 1)
        .find(|w| log_sum >= w[0].log_e + s * w[1].log_y - 1e-12 * log_sum.abs().max(1.0))
        .map(|w| w[0].n);
    Ok(CoverRecord { size: cover.len(), s, log_sum, big_n, witness, ok: witness.is_some() })
}

/// A random prefix refinement of some `B_b`: each word is kept or replaced by
/// prefixes of its extensions in a deeper level. Covers the last level.
pub fn random_cover<R: Rng>(levels: &[Level], rng: &mut R) -> Vec<Word> {
    assert!(levels.len() >= 2, "need at least two levels");
    let base = rng.random_range(1..levels.len());
    let mut out: Vec<Word> = Vec::new();
    for x in &levels[base].words {
        if base + 1 == levels.len() || rng.random_bool(0.5) {
            out.push(x.clone());
            continue;
        }
        let deep = &levels[rng.random_range(base + 1..levels.len())];
        let lo = deep.words.partition_point(|w| w.letters() < x.letters());
        let ext: Vec<&Word> = deep.words[lo..].iter().take_while(|w| w.starts_with(x)).collect();
        if ext.is_empty() {
            out.push(x.clone());
            continue;
        }
        let cut = rng.random_range(x.len()..=deep.len as usize);
        out.extend(ext.iter().map(|w| Word::from(&w[..cut])));
    }
    out.sort();
    out.dedup();
    out
}

/// Results of [`cover_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSuite {
    pub seed: u64,
    pub covers: usize,
    pub violations: usize,
    pub records: Vec<CoverRecord>,
}

/// Tests `count` random refinements of the explicit levels for each `s`.
pub fn cover_suite(
    ledger: &DimensionLedger,
    levels: &[Level],
    nu: &ParryMeasure,
    s_values: &[f64],
    count: usize,
    seed: u64,
) -> Result<CoverSuite> {
    if levels.len() < 2 {
        return Err(domain_err!("cover suite needs at least two explicit levels"));
    }
    let deepest = &levels.last().expect("nonempty").words;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(count * s_values.len());
    for _ in 0..count {
        let cover = random_cover(levels, &mut rng);
        for &s in s_values {
            records.push(cover_bound(ledger, &cover, s, nu, deepest)?);
        }
    }
    let violations = records.iter().filter(|r| !r.ok).count();
    Ok(CoverSuite { seed, covers: count, violations, records })
}
