use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::parry::ParryMeasure;
use crate::beta::State;
use crate::error::{domain_err, Error, Result};
use crate::shift::{Alphabet, CylinderMeasure, Letter};

/// `mu = F_* nu` for the letter map `F: 1 -> 0`.
///
/// `mu([w])` sums `nu([u])` over admissible `u` with `F(u) = w`.
#[derive(Debug, Clone)]
pub struct PushforwardMeasure {
    nu: ParryMeasure,
}

pub fn pushforward_mu(nu: &ParryMeasure) -> Result<PushforwardMeasure> {
    if nu.alphabet().size() < 3 {
        return Err(domain_err!("the pushforward needs at least 3 letters"));
    }
    if nu.mass(&[0]) == 0.0 || nu.mass(&[1]) == 0.0 {
        return Err(Error::Model("nu([0]) and nu([1]) must be positive".into()));
    }
    Ok(PushforwardMeasure { nu: nu.clone() })
}

/// Letters `b` with `F(b) = a`.
fn preimages(a: Letter) -> &'static [Letter] {
    match a {
        0 => &[0, 1],
        1 => &[],
        2 => &[2],
        _ => &[],
    }
}

impl PushforwardMeasure {
    pub fn nu(&self) -> &ParryMeasure {
        &self.nu
    }

    /// The letter map itself.
    pub fn collapse(a: Letter) -> Letter {
        if a == 1 {
            0
        } else {
            a
        }
    }

    fn preimage_letters(a: Letter) -> Vec<Letter> {
        if a >= 3 {
            vec![a]
        } else {
            preimages(a).to_vec()
        }
    }
}

impl CylinderMeasure for PushforwardMeasure {
    fn alphabet(&self) -> Alphabet {
        self.nu.alphabet()
    }

    fn mass(&self, word: &[Letter]) -> f64 {
        let aut = self.nu.automaton();
        let n = aut.num_states();
        let mut weight = self.nu.left().to_vec();
        for &a in word {
            let mut next = vec![0.0; n];
            for b in Self::preimage_letters(a) {
                for (s, &w) in weight.iter().enumerate() {
                    if let Some(t) = aut.step(s as State, b) {
                        next[t as usize] += w;
                    }
                }
            }
            weight = next;
        }
        let s: f64 = weight.iter().enumerate().map(|(t, w)| w * self.nu.end_weight(t as State)).sum();
        s * self.nu.beta().powi(-(word.len() as i32))
    }

    fn exact_mass(&self, word: &[Letter]) -> Option<BigRational> {
        let base = self.nu.integer_base()?;
        if word.iter().any(|&a| a as u32 >= base) {
            return Some(BigRational::zero());
        }
        let mut paths = BigInt::one();
        for &a in word {
            paths *= Self::preimage_letters(a).len();
        }
        Some(BigRational::new(paths, num_traits::pow(BigInt::from(base), word.len())))
    }

    fn label(&self) -> &str {
        "mu"
    }
}

/// Digits `i*`, `j*` with `mu([i*]) > nu([i*])` and `mu([j*]) = nu([j*])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurePair {
    pub divergent: Letter,
    pub convergent: Letter,
    pub mu_divergent: f64,
    pub mu_convergent: f64,
    pub nu_divergent: f64,
    pub nu_convergent: f64,
}

/// Finds the digit pair for the pushforward, exactly on integer bases.
pub fn measure_pair(nu: &ParryMeasure, mu: &PushforwardMeasure) -> Result<MeasurePair> {
    let i = 0;
    let j = (2..nu.alphabet().size() as Letter)
        .find(|&j| match (mu.exact_mass(&[j]), nu.exact_mass(&[j])) {
            (Some(a), Some(b)) => a == b,
            _ => (mu.mass(&[j]) - nu.mass(&[j])).abs() <= 1e-12,
        })
        .ok_or_else(|| Error::Model("no letter with mu([j]) = nu([j])".into()))?;
    let above = match (mu.exact_mass(&[i]), nu.exact_mass(&[i])) {
        (Some(a), Some(b)) => a > b,
        _ => mu.mass(&[i]) > nu.mass(&[i]),
    };
    if !above {
        return Err(Error::Model("mu([0]) does not exceed nu([0])".into()));
    }
    Ok(MeasurePair {
        divergent: i,
        convergent: j,
        mu_divergent: mu.mass(&[i]),
        mu_convergent: mu.mass(&[j]),
        nu_divergent: nu.mass(&[i]),
        nu_convergent: nu.mass(&[j]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::BetaSystem;
    use crate::measures::parry_measure;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn integer_examples() {
        let nu = parry_measure(&BetaSystem::integer(3).unwrap()).unwrap();
        let mu = pushforward_mu(&nu).unwrap();
        assert_eq!(mu.exact_mass(&[0]).unwrap(), q(2, 3));
        assert_eq!(mu.exact_mass(&[1]).unwrap(), q(0, 1));
        assert_eq!(mu.exact_mass(&[2]).unwrap(), q(1, 3));
        assert_eq!(mu.exact_mass(&[0, 0]).unwrap(), q(4, 9));
        assert!((mu.mass(&[0, 0]) - 4.0 / 9.0).abs() < 1e-15);
        let pair = measure_pair(&nu, &mu).unwrap();
        assert_eq!((pair.divergent, pair.convergent), (0, 2));
    }

    #[test]
    fn needs_three_letters() {
        let nu = parry_measure(&BetaSystem::golden()).unwrap();
        assert!(pushforward_mu(&nu).is_err());
    }

    #[test]
    fn silver_pushforward() {
        let nu = parry_measure(&BetaSystem::silver()).unwrap();
        let mu = pushforward_mu(&nu).unwrap();
        assert!((mu.mass(&[0]) - nu.mass(&[0]) - nu.mass(&[1])).abs() < 1e-12);
        assert!((mu.mass(&[2]) - nu.mass(&[2])).abs() < 1e-12);
        // preimages of 00 are 00, 01, 10, 11, all admissible
        let direct: f64 = [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|u| nu.mass(u)).sum();
        assert!((mu.mass(&[0, 0]) - direct).abs() < 1e-12);
    }
}
