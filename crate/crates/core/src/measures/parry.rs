use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::beta::{build_automaton, evaluate_digits, BetaSystem, ExpansionOfOne, LanguageAutomaton, Profile, State};
use crate::error::{Error, Result};
use crate::shift::{Alphabet, CylinderMeasure, Letter};

const POWER_ITERATIONS: usize = 10_000;

/// The Parry measure, the unique measure of maximal entropy of a Parry
/// beta-shift, realized as a Markov measure on the follower automaton:
/// `nu([w]) = sum_s u_s v_{delta(s, w)} / beta^{|w|}` with `u`, `v` the left
/// and right Perron vectors normalized by `u . v = 1`.
#[derive(Debug, Clone)]
pub struct ParryMeasure {
    automaton: LanguageAutomaton,
    beta: f64,
    ln_beta: f64,
    integer: Option<u32>,
    u: Vec<f64>,
    v: Vec<f64>,
    orbit: Vec<f64>,
    weights: Vec<f64>,
    normaliser: f64,
}

pub fn parry_measure(system: &BetaSystem) -> Result<ParryMeasure> {
    let automaton = build_automaton(system)?;
    let beta = system.beta();
    let adj = automaton.adjacency();
    let n = automaton.num_states();
    let (u, lu) = perron(n, |x, y| {
        for s in 0..n {
            for t in 0..n {
                y[t] += adj[s][t] as f64 * x[s];
            }
        }
    });
    let (mut v, lv) = perron(n, |x, y| {
        for s in 0..n {
            for t in 0..n {
                y[s] += adj[s][t] as f64 * x[t];
            }
        }
    });
    for lambda in [lu, lv] {
        if (lambda - beta).abs() > 1e-9 * beta {
            return Err(Error::Model(format!("Perron root {lambda} differs from beta = {beta}")));
        }
    }
    let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    v.iter_mut().for_each(|x| *x /= dot);

    let orbit = system.orbit_of_one()?;
    let (pre, period) = match system.one() {
        ExpansionOfOne::Periodic { preperiod, period } => (preperiod.len(), Some(period.len())),
        _ => (orbit.len(), None),
    };
    let weights: Vec<f64> = (0..orbit.len())
        .map(|k| {
            let w = beta.powi(-(k as i32));
            match period {
                Some(q) if k >= pre => w / (1.0 - beta.powi(-(q as i32))),
                _ => w,
            }
        })
        .collect();
    let normaliser = weights.iter().zip(&orbit).map(|(w, t)| w * t).sum();
    Ok(ParryMeasure {
        automaton,
        beta,
        ln_beta: beta.ln(),
        integer: system.integer_base(),
        u,
        v,
        orbit,
        weights,
        normaliser,
    })
}

/// Power iteration for the Perron vector of a primitive matrix.
fn perron(n: usize, apply: impl Fn(&[f64], &mut [f64])) -> (Vec<f64>, f64) {
    let mut x = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let mut y = vec![0.0; n];
        apply(&x, &mut y);
        let norm: f64 = y.iter().sum();
        y.iter_mut().for_each(|e| *e /= norm);
        let diff: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        lambda = norm;
        if diff < 1e-16 {
            break;
        }
    }
    (x, lambda)
}

impl ParryMeasure {
    pub fn automaton(&self) -> &LanguageAutomaton {
        &self.automaton
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn left(&self) -> &[f64] {
        &self.u
    }

    pub fn right(&self) -> &[f64] {
        &self.v
    }

    pub fn integer_base(&self) -> Option<u32> {
        self.integer
    }

    /// `log nu([w])` for a word of length `len` with the given profile;
    /// `-inf` when the word is not admissible.
    pub fn log_mass_of_profile(&self, profile: &Profile, len: u64) -> f64 {
        let s: f64 = profile
            .iter()
            .enumerate()
            .filter_map(|(q, t)| t.map(|t| self.u[q] * self.v[t as usize]))
            .sum();
        s.ln() - len as f64 * self.ln_beta
    }

    pub fn log_mass(&self, word: &[Letter]) -> f64 {
        self.log_mass_of_profile(&self.automaton.profile(word), word.len() as u64)
    }

    /// `nu([w])` by integrating the invariant density
    /// `h(x) = (1/F) sum_n beta^{-n} 1[x < T^n 1]` over the fundamental
    /// interval of `w`.
    pub fn mass_by_density(&self, word: &[Letter]) -> f64 {
        let Some(end) = self.automaton.run(0, word) else {
            return 0.0;
        };
        let scale = self.beta.powi(-(word.len() as i32));
        let a = evaluate_digits(word, self.beta);
        let b = a + scale * self.orbit[end as usize];
        let integral: f64 = self
            .weights
            .iter()
            .zip(&self.orbit)
            .map(|(w, &t)| w * (b.min(t) - a).max(0.0))
            .sum();
        integral / self.normaliser
    }

    /// Stationary weight `u_s v_s` of each state.
    pub fn stationary(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(a, b)| a * b).collect()
    }

    pub(crate) fn end_weight(&self, t: State) -> f64 {
        self.v[t as usize]
    }
}

impl CylinderMeasure for ParryMeasure {
    fn alphabet(&self) -> Alphabet {
        self.automaton.alphabet()
    }

    fn mass(&self, word: &[Letter]) -> f64 {
        if let Some(n) = self.integer {
            return if word.iter().all(|&a| (a as u32) < n) { (n as f64).powi(-(word.len() as i32)) } else { 0.0 };
        }
        let s: f64 = (0..self.automaton.num_states() as State)
            .filter_map(|q| self.automaton.run(q, word).map(|t| self.u[q as usize] * self.v[t as usize]))
            .sum();
        s * self.beta.powi(-(word.len() as i32))
    }

    fn exact_mass(&self, word: &[Letter]) -> Option<BigRational> {
        let n = self.integer?;
        if word.iter().any(|&a| a as u32 >= n) {
            return Some(BigRational::from_integer(0.into()));
        }
        Some(BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(n), word.len())))
    }

    fn label(&self) -> &str {
        "nu"
    }
}
