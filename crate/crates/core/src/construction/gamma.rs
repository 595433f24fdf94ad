use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beta::LanguageAutomaton;
use crate::error::{Error, Result};
use crate::shift::{Letter, Word};

/// How the frequency tolerance of `Gamma(nu, n)` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EpsilonPolicy {
    /// A fixed tolerance.
    Fixed { epsilon: f64 },
    /// `max(eps_min(n), k / sqrt n)`, where `eps_min(n)` is the smallest
    /// tolerance that keeps the family nonempty.
    Floor { k: f64 },
}

impl Default for EpsilonPolicy {
    fn default() -> Self {
        EpsilonPolicy::Floor { k: 1.0 }
    }
}

/// Admissible words of length `n` whose tracked digit frequencies stay close
/// to the target masses.
#[derive(Debug, Clone, Serialize)]
pub struct GammaFamily {
    pub n: usize,
    #[serde(skip)]
    pub words: Vec<Word>,
    pub size: usize,
    /// Tolerance used by the filter.
    pub tolerance: f64,
    /// Largest deviation among kept words.
    pub epsilon: f64,
    /// `|(1/n) log |Gamma| - h|`.
    pub eta: f64,
}

/// Largest `|P_d(w) - target_d|` over the tracked digits.
pub fn deviation(word: &[Letter], digits: &[Letter], targets: &[f64]) -> f64 {
    let n = word.len() as f64;
    digits
        .iter()
        .zip(targets)
        .map(|(&d, &t)| (word.iter().filter(|&&a| a == d).count() as f64 / n - t).abs())
        .fold(0.0, f64::max)
}

/// Builds `Gamma(nu, n)` by filtering the length-`n` language.
pub fn gamma_family(
    automaton: &LanguageAutomaton,
    n: usize,
    digits: &[Letter],
    targets: &[f64],
    entropy: f64,
    policy: EpsilonPolicy,
) -> Result<GammaFamily> {
    if n == 0 {
        return Err(Error::Policy("Gamma needs n >= 1".into()));
    }
    let words = automaton.enumerate(n);
    let devs: Vec<f64> = words.par_iter().map(|w| deviation(w, digits, targets)).collect();
    let tolerance = match policy {
        EpsilonPolicy::Fixed { epsilon } => epsilon,
        EpsilonPolicy::Floor { k } => {
            let min = devs.iter().copied().fold(f64::INFINITY, f64::min);
            min.max(k / (n as f64).sqrt())
        }
    };
    let kept: Vec<(Word, f64)> = words
        .into_iter()
        .zip(devs)
        .filter(|(_, d)| *d <= tolerance + 1e-12)
        .collect();
    if kept.is_empty() {
        return Err(Error::Policy(format!("Gamma({n}) is empty at tolerance {tolerance}")));
    }
    let epsilon = kept.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    let words: Vec<Word> = kept.into_iter().map(|(w, _)| w).collect();
    let size = words.len();
    let eta = ((size as f64).ln() / n as f64 - entropy).abs();
    Ok(GammaFamily { n, words, size, tolerance, epsilon, eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::{build_automaton, BetaSystem};

    fn three() -> LanguageAutomaton {
        build_automaton(&BetaSystem::integer(3).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let h = 3f64.ln();
        let t = [1.0 / 3.0, 1.0 / 3.0];
        let g = gamma_family(&three(), 3, &[0, 1], &t, h, EpsilonPolicy::Fixed { epsilon: 1.0 / 3.0 }).unwrap();
        assert_eq!(g.size, 25);
        assert!(!g.words.iter().any(|w| w.to_string() == "000" || w.to_string() == "111"));
        assert!((g.eta - (h - 25f64.ln() / 3.0)).abs() < 1e-12);
        assert!((g.eta - 0.02565).abs() < 1e-5);
        let all = gamma_family(&three(), 3, &[0, 1], &t, h, EpsilonPolicy::Fixed { epsilon: 1.0 }).unwrap();
        assert_eq!(all.size, 27);
    }

    #[test]
    fn empty_family_is_a_policy_error() {
        let t = [1.0 / 3.0, 1.0 / 3.0];
        let r = gamma_family(&three(), 2, &[0, 1], &t, 3f64.ln(), EpsilonPolicy::Fixed { epsilon: 0.1 });
        assert!(matches!(r, Err(Error::Policy(_))));
    }

    #[test]
    fn floor_policy_sizes() {
        let t = [1.0 / 3.0, 1.0 / 3.0];
        let sizes: Vec<usize> = (1..=6)
            .map(|n| gamma_family(&three(), n, &[0, 2], &t, 3f64.ln(), EpsilonPolicy::default()).unwrap().size)
            .collect();
        assert_eq!(sizes, [3, 9, 25, 79, 221, 703]);
    }
}
