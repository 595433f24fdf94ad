use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::beta::rational_to_f64;
use crate::error::{domain_err, Result};
use crate::shift::{Alphabet, CylinderMeasure, Letter};

/// Product measure with rational letter weights.
#[derive(Debug, Clone)]
pub struct BernoulliMeasure {
    alphabet: Alphabet,
    weights: Vec<BigRational>,
}

impl BernoulliMeasure {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        let alphabet = Alphabet::new(weights.len())?;
        if weights.iter().any(|w| w < &BigRational::zero()) {
            return Err(domain_err!("negative weight"));
        }
        if weights.iter().sum::<BigRational>() != BigRational::one() {
            return Err(domain_err!("weights must sum to 1"));
        }
        Ok(Self { alphabet, weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![BigRational::new(1.into(), (n as i64).into()); n])
    }
}

impl CylinderMeasure for BernoulliMeasure {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn mass(&self, word: &[Letter]) -> f64 {
        rational_to_f64(&self.exact_mass(word).expect("rational weights"))
    }

    fn exact_mass(&self, word: &[Letter]) -> Option<BigRational> {
        let mut m = BigRational::one();
        for &a in word {
            m *= self.weights.get(a as usize).cloned().unwrap_or_else(BigRational::zero);
        }
        Some(m)
    }

    fn label(&self) -> &str {
        "bernoulli"
    }
}
