use std::collections::BTreeMap;

use serde::Serialize;

use super::parry::ParryMeasure;
use crate::beta::{LanguageAutomaton, StateSet};
use crate::error::{Error, Result};
use crate::shift::{CylinderMeasure, Letter};

/// Finite-memory realization of `e_nu(w) = -log nu(w_1 | w_2 w_3 ...)`.
///
/// The future `w_2 w_3 ...` enters only through its follower class: the set
/// of states from which it can be read. With `U(S) = sum_{s in S} u_s`,
/// `nu(a | R) = U(pre_a R) / (beta U(R))`.
#[derive(Debug, Clone, Serialize)]
pub struct InformationFunction {
    #[serde(skip)]
    automaton: LanguageAutomaton,
    classes: Vec<StateSet>,
    /// `table[class][letter]`; zero where `a` cannot precede the class.
    table: Vec<Vec<f64>>,
    /// `next[class][letter]`: class of `a` followed by the class.
    #[serde(skip)]
    next: Vec<Vec<Option<usize>>>,
    lower_bound: f64,
}

pub fn information_function(nu: &ParryMeasure) -> Result<InformationFunction> {
    let automaton = nu.automaton().clone();
    let u = nu.left();
    let weight = |s: StateSet| -> f64 { s.iter().map(|q| u[q as usize]).sum() };
    let mut index = BTreeMap::new();
    let mut classes = vec![automaton.all_states()];
    index.insert(automaton.all_states(), 0usize);
    let mut k = 0;
    while k < classes.len() {
        let r = classes[k];
        for a in automaton.alphabet().letters() {
            let p = automaton.preimage(a, r);
            if !p.is_empty() && !index.contains_key(&p) {
                index.insert(p, classes.len());
                classes.push(p);
            }
        }
        k += 1;
    }
    let beta = nu.beta();
    let mut table = Vec::with_capacity(classes.len());
    let mut next = Vec::with_capacity(classes.len());
    let mut lower_bound = f64::INFINITY;
    for &r in &classes {
        let mut row = Vec::new();
        let mut nrow = Vec::new();
        let total = weight(r);
        for a in automaton.alphabet().letters() {
            let p = automaton.preimage(a, r);
            if p.is_empty() {
                row.push(0.0);
                nrow.push(None);
                continue;
            }
            let prob = weight(p) / (beta * total);
            if prob.is_nan() || prob <= 0.0 {
                return Err(Error::Model(format!("zero conditional probability for letter {a}")));
            }
            lower_bound = lower_bound.min(-prob.ln());
            row.push(prob);
            nrow.push(Some(index[&p]));
        }
        table.push(row);
        next.push(nrow);
    }
    Ok(InformationFunction { automaton, classes, table, next, lower_bound })
}

impl InformationFunction {
    /// `C_nu`, the minimum of `e_nu` over the table.
    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    pub fn classes(&self) -> &[StateSet] {
        &self.classes
    }

    pub fn conditional(&self, letter: Letter, class: usize) -> f64 {
        self.table[class][letter as usize]
    }

    /// Sum of each table row; every entry is 1 up to rounding.
    pub fn row_sums(&self) -> Vec<f64> {
        self.table.iter().map(|r| r.iter().sum()).collect()
    }

    /// `e_nu` at every position of `w`, using the class of the finite future.
    pub fn values(&self, word: &[Letter]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; word.len()];
        let mut class = 0;
        for (i, &a) in word.iter().enumerate().rev() {
            let p = self.table[class].get(a as usize).copied().unwrap_or(0.0);
            let nc = self.next[class].get(a as usize).copied().flatten();
            match nc {
                Some(c) if p > 0.0 => {
                    out[i] = -p.ln();
                    class = c;
                }
                _ => return Err(Error::Model("word is not admissible".into())),
            }
        }
        Ok(out)
    }

    /// `<e_nu, T_n(w)>`.
    pub fn average(&self, word: &[Letter]) -> Result<f64> {
        let v = self.values(word)?;
        Ok(v.iter().sum::<f64>() / word.len() as f64)
    }

    /// `|(1/n) log nu([w]) + <e_nu, T_n(w)>|`.
    pub fn defect(&self, nu: &ParryMeasure, word: &[Letter]) -> Result<f64> {
        Ok((nu.log_mass(word) / word.len() as f64 + self.average(word)?).abs())
    }

    /// Largest defect over all admissible words of length `n`.
    pub fn max_defect(&self, nu: &ParryMeasure, n: usize) -> Result<f64> {
        let words = self.automaton.enumerate(n);
        let mut worst: f64 = 0.0;
        for w in &words {
            worst = worst.max(self.defect(nu, w)?);
        }
        Ok(worst)
    }

    /// `sum_{|w|=n} nu([w]) e_nu(w)` with the future truncated after `n`.
    pub fn expected(&self, nu: &ParryMeasure, n: usize) -> Result<f64> {
        let mut total = 0.0;
        for w in self.automaton.enumerate(n) {
            total += nu.mass(&w) * self.values(&w)?[0];
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::BetaSystem;
    use crate::measures::{entropy, parry_measure};

    #[test]
    fn uniform_information() {
        let nu = parry_measure(&BetaSystem::integer(3).unwrap()).unwrap();
        let e = information_function(&nu).unwrap();
        let l3 = 3f64.ln();
        assert!((e.lower_bound() - l3).abs() < 1e-12);
        assert!((e.average(&[0, 1, 2, 2]).unwrap() - l3).abs() < 1e-12);
        assert!((e.expected(&nu, 3).unwrap() - l3).abs() < 1e-12);
    }

    #[test]
    fn silver_rows_sum_to_one() {
        let nu = parry_measure(&BetaSystem::silver()).unwrap();
        let e = information_function(&nu).unwrap();
        for s in e.row_sums() {
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(e.lower_bound() > 0.0);
        assert!(e.max_defect(&nu, 10).unwrap() <= 0.2);
        let d: Vec<f64> = (2..=8).map(|n| e.max_defect(&nu, n).unwrap()).collect();
        assert!(d.windows(2).all(|p| p[1] <= p[0] + 1e-12), "{d:?}");
        let gaps: Vec<f64> =
            (1..=6).map(|n| (entropy(&nu, n) - e.expected(&nu, n).unwrap()).abs()).collect();
        assert!(gaps.windows(2).all(|p| p[1] <= p[0] + 1e-12), "{gaps:?}");
    }
}
