use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::word::{all_words, Alphabet, Letter};

/// A shift-invariant measure evaluated on cylinder sets `[w]`.
pub trait CylinderMeasure: Sync {
    fn alphabet(&self) -> Alphabet;

    /// `measure([w])` in double precision.
    fn mass(&self, word: &[Letter]) -> f64;

    /// Exact value when the measure is rational, `None` otherwise.
    fn exact_mass(&self, _word: &[Letter]) -> Option<BigRational> {
        None
    }

    fn label(&self) -> &str;
}

impl<M: CylinderMeasure + ?Sized> CylinderMeasure for &M {
    fn alphabet(&self) -> Alphabet {
        (**self).alphabet()
    }
    fn mass(&self, word: &[Letter]) -> f64 {
        (**self).mass(word)
    }
    fn exact_mass(&self, word: &[Letter]) -> Option<BigRational> {
        (**self).exact_mass(word)
    }
    fn label(&self) -> &str {
        (**self).label()
    }
}

/// Truncated weak-star distance `sum_{n=1..K} 2^{-n} sum_{|w|=n} |a[w] - b[w]|`.
///
/// Words outside the common support contribute zero on both sides, so the
/// inner sum runs over all of `A^n`.
pub fn measure_distance(a: &dyn CylinderMeasure, b: &dyn CylinderMeasure, k: usize) -> f64 {
    let alphabet = common_alphabet(a, b);
    let mut total = 0.0;
    let mut weight = 1.0;
    for n in 1..=k {
        weight *= 0.5;
        let level: f64 = all_words(alphabet, n).map(|w| (a.mass(&w) - b.mass(&w)).abs()).sum();
        total += weight * level;
    }
    total
}

/// Exact variant of [`measure_distance`]; `None` unless both measures are rational.
pub fn measure_distance_exact(
    a: &dyn CylinderMeasure,
    b: &dyn CylinderMeasure,
    k: usize,
) -> Option<BigRational> {
    let alphabet = common_alphabet(a, b);
    let mut total = BigRational::zero();
    let mut weight = BigRational::from_integer(1.into());
    let half = BigRational::new(1.into(), 2.into());
    for n in 1..=k {
        weight *= &half;
        let mut level = BigRational::zero();
        for w in all_words(alphabet, n) {
            level += (a.exact_mass(&w)? - b.exact_mass(&w)?).abs();
        }
        total += &weight * level;
    }
    Some(total)
}

fn common_alphabet(a: &dyn CylinderMeasure, b: &dyn CylinderMeasure) -> Alphabet {
    if a.alphabet().size() >= b.alphabet().size() {
        a.alphabet()
    } else {
        b.alphabet()
    }
}

/// Default truncation level of the weak-star norm.
pub const DEFAULT_NORM_DEPTH: usize = 4;
