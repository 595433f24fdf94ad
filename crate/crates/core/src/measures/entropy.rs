use crate::beta::LanguageAutomaton;
use crate::shift::{CylinderMeasure, Letter};

/// Level-`n` entropy approximant `-(1/n) sum_{|w|=n} m[w] log m[w]` over the
/// exactly-length-`n` partition. Zero-mass prefixes are pruned.
pub fn entropy(measure: &dyn CylinderMeasure, n: usize) -> f64 {
    assert!(n >= 1, "entropy level must be positive");
    let mut total = 0.0;
    let mut buf = Vec::with_capacity(n);
    walk(measure, n, &mut buf, &mut |m| {
        if m > 0.0 {
            total -= m * m.ln();
        }
    });
    total / n as f64
}

fn walk(measure: &dyn CylinderMeasure, n: usize, buf: &mut Vec<Letter>, f: &mut dyn FnMut(f64)) {
    for a in measure.alphabet().letters() {
        buf.push(a);
        let m = measure.mass(buf);
        if m > 0.0 {
            if buf.len() == n {
                f(m);
            } else {
                walk(measure, n, buf, f);
            }
        }
        buf.pop();
    }
}

/// `(1/n) log |L_n|`.
pub fn topological_entropy(automaton: &LanguageAutomaton, n: usize) -> f64 {
    let count = automaton.count(n);
    log_biguint(&count) / n as f64
}

pub(crate) fn log_biguint(x: &num_bigint::BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: u64 = num_traits::ToPrimitive::to_u64(&(x >> shift)).expect("64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::{build_automaton, BetaSystem};
    use crate::measures::{parry_measure, pushforward_mu};

    #[test]
    fn examples() {
        let system = BetaSystem::integer(3).unwrap();
        let nu = parry_measure(&system).unwrap();
        for n in 1..=4 {
            assert!((entropy(&nu, n) - 3f64.ln()).abs() < 1e-12);
        }
        let mu = pushforward_mu(&nu).unwrap();
        let expect = -(2.0 / 3.0) * (2f64 / 3.0).ln() - (1.0 / 3.0) * (1f64 / 3.0).ln();
        assert!((entropy(&mu, 1) - expect).abs() < 1e-12);
        assert!((expect - 0.6365).abs() < 1e-4);
    }

    #[test]
    fn dirac_has_zero_entropy() {
        use crate::measures::BernoulliMeasure;
        use num_rational::BigRational;
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        let dirac = BernoulliMeasure::new(vec![one, zero.clone(), zero]).unwrap();
        assert_eq!(entropy(&dirac, 3), 0.0);
    }

    #[test]
    fn word_count_entropy() {
        let a = build_automaton(&BetaSystem::integer(3).unwrap()).unwrap();
        assert!((topological_entropy(&a, 7) - 3f64.ln()).abs() < 1e-12);
        let s = build_automaton(&BetaSystem::silver()).unwrap();
        assert!((topological_entropy(&s, 20) - (1.0 + 2f64.sqrt()).ln()).abs() < 0.05);
    }
}
