use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

use super::metric::CylinderMeasure;
use super::word::{Alphabet, Letter, Word};
use crate::error::{domain_err, Result};

/// Block counts of a finite word up to a maximal block length.
///
/// Windows that overhang the end of the word are not counted, while the
/// denominator stays `|w|`. Length-`k` counts therefore sum to `n - k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    alphabet: Alphabet,
    max_len: usize,
    sample_len: u64,
    counts: BTreeMap<Word, u64>,
}

/// `T_n(w)` restricted to blocks of length at most `max_len`.
pub fn empirical(word: &[Letter], alphabet: Alphabet, max_len: usize) -> Result<EmpiricalMeasure> {
    if word.is_empty() {
        return Err(domain_err!("empirical measure of the empty word"));
    }
    if max_len == 0 {
        return Err(domain_err!("maximal block length must be at least 1"));
    }
    alphabet.check(word)?;
    let mut counts = BTreeMap::new();
    for k in 1..=max_len.min(word.len()) {
        for window in word.windows(k) {
            *counts.entry(Word::from(window)).or_insert(0) += 1;
        }
    }
    Ok(EmpiricalMeasure { alphabet, max_len, sample_len: word.len() as u64, counts })
}

impl EmpiricalMeasure {
    pub fn sample_len(&self) -> u64 {
        self.sample_len
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn count(&self, block: &[Letter]) -> u64 {
        self.counts.get(block).copied().unwrap_or(0)
    }

    /// `P_b(w, n)` as an exact fraction.
    pub fn frequency(&self, block: &[Letter]) -> Result<Ratio<u64>> {
        if block.is_empty() || block.len() > self.max_len {
            return Err(domain_err!(
                "block length {} outside 1..={}",
                block.len(),
                self.max_len
            ));
        }
        Ok(Ratio::new(self.count(block), self.sample_len))
    }

    /// Recorded blocks with their counts, in length-lex order per length.
    pub fn blocks(&self) -> impl Iterator<Item = (&Word, u64)> {
        self.counts.iter().map(|(w, &c)| (w, c))
    }
}

impl CylinderMeasure for EmpiricalMeasure {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn mass(&self, word: &[Letter]) -> f64 {
        if word.is_empty() {
            return 1.0;
        }
        self.count(word) as f64 / self.sample_len as f64
    }

    fn exact_mass(&self, word: &[Letter]) -> Option<BigRational> {
        if word.is_empty() {
            return Some(BigRational::from_integer(1.into()));
        }
        if word.len() > self.max_len {
            return None;
        }
        Some(BigRational::new(BigInt::from(self.count(word)), BigInt::from(self.sample_len)))
    }

    fn label(&self) -> &str {
        "empirical"
    }
}
