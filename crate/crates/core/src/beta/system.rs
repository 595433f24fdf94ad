use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::field::{rational_to_f64, FieldElem, NumberField};
use crate::error::{domain_err, Error, Result};
use crate::shift::{Alphabet, Letter};

/// Default orbit length searched for eventual periodicity of `d_beta(1)`.
pub const DEFAULT_MAX_LEN: usize = 64;

/// JSON system descriptor, e.g. `{"kind":"integer","N":3}` or
/// `{"kind":"algebraic","minpoly":[-1,-2,1],"interval":[2.41,2.42]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SystemDescriptor {
    Integer {
        #[serde(rename = "N")]
        n: u32,
    },
    Algebraic {
        /// Integer coefficients, constant term first.
        minpoly: Vec<i64>,
        interval: [f64; 2],
    },
}

/// The expansion of 1, or the admission that no period was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ExpansionOfOne {
    /// Terminates after these digits.
    Finite { digits: Vec<u32> },
    /// `preperiod period period ...`
    Periodic { preperiod: Vec<u32>, period: Vec<u32> },
    Undetected,
}

#[derive(Debug)]
enum Kind {
    Integer(u32),
    Algebraic(Mutex<NumberField>),
}

/// A base `beta > 1` together with its digit alphabet and `d_beta(1)`.
#[derive(Debug)]
pub struct BetaSystem {
    descriptor: SystemDescriptor,
    kind: Kind,
    alphabet: Alphabet,
    beta: f64,
    one: ExpansionOfOne,
}

impl Clone for BetaSystem {
    fn clone(&self) -> Self {
        Self::from_descriptor(&self.descriptor).expect("descriptor was valid")
    }
}

impl BetaSystem {
    pub fn integer(n: u32) -> Result<Self> {
        Self::from_descriptor(&SystemDescriptor::Integer { n })
    }

    pub fn algebraic(minpoly: Vec<i64>, interval: [f64; 2]) -> Result<Self> {
        Self::from_descriptor(&SystemDescriptor::Algebraic { minpoly, interval })
    }

    /// The silver ratio `1 + sqrt 2`.
    pub fn silver() -> Self {
        Self::algebraic(vec![-1, -2, 1], [2.41, 2.42]).expect("silver ratio")
    }

    /// The golden ratio.
    pub fn golden() -> Self {
        Self::algebraic(vec![-1, -1, 1], [1.61, 1.62]).expect("golden ratio")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: SystemDescriptor =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("system descriptor: {e}")))?;
        Self::from_descriptor(&d)
    }

    pub fn from_descriptor(d: &SystemDescriptor) -> Result<Self> {
        match d {
            SystemDescriptor::Integer { n } => {
                if *n < 2 {
                    return Err(domain_err!("integer base must be at least 2, got {n}"));
                }
                let alphabet = Alphabet::new(*n as usize)?;
                Ok(Self {
                    descriptor: d.clone(),
                    kind: Kind::Integer(*n),
                    alphabet,
                    beta: *n as f64,
                    one: ExpansionOfOne::Finite { digits: vec![*n] },
                })
            }
            SystemDescriptor::Algebraic { minpoly, interval } => {
                let lo = BigRational::from_f64(interval[0])
                    .ok_or_else(|| domain_err!("interval endpoint is not finite"))?;
                let hi = BigRational::from_f64(interval[1])
                    .ok_or_else(|| domain_err!("interval endpoint is not finite"))?;
                let mut field = NumberField::new(minpoly, lo, hi)?;
                let b = field.beta();
                let floor = field.floor(&b)?;
                let size = floor
                    .to_usize()
                    .and_then(|f| f.checked_add(1))
                    .filter(|&s| s <= 256)
                    .ok_or_else(|| Error::Unsupported("base too large for a byte alphabet".into()))?;
                let alphabet = Alphabet::new(size.max(2))?;
                let beta = field.to_f64(&b);
                let mut system = Self {
                    descriptor: d.clone(),
                    kind: Kind::Algebraic(Mutex::new(field)),
                    alphabet,
                    beta,
                    one: ExpansionOfOne::Undetected,
                };
                system.one = system.expansion_of_one(DEFAULT_MAX_LEN)?;
                Ok(system)
            }
        }
    }

    pub fn descriptor(&self) -> &SystemDescriptor {
        &self.descriptor
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `log beta`, the topological entropy of the beta-shift.
    pub fn entropy(&self) -> f64 {
        self.beta.ln()
    }

    /// Bounds `lo <= log beta <= hi` that hold despite rounding.
    pub fn log_beta_enclosure(&self) -> (f64, f64) {
        const SLACK: f64 = 8.0 * f64::EPSILON;
        let (lo, hi) = match &self.kind {
            Kind::Integer(n) => (*n as f64, *n as f64),
            Kind::Algebraic(field) => {
                let (lo, hi) = field.lock().expect("field lock").enclosure(80);
                (rational_to_f64(&lo), rational_to_f64(&hi))
            }
        };
        let (a, b) = (lo.ln(), hi.ln());
        (a - SLACK * a.abs().max(1.0), b + SLACK * b.abs().max(1.0))
    }

    pub fn integer_base(&self) -> Option<u32> {
        match self.kind {
            Kind::Integer(n) => Some(n),
            Kind::Algebraic(_) => None,
        }
    }

    /// `d_beta(1)` as found with the default search length.
    pub fn one(&self) -> &ExpansionOfOne {
        &self.one
    }

    /// Runs the orbit of 1 exactly for at most `max_len` steps.
    ///
    /// Integer bases return `Finite([N])` by convention; the digit `N` is
    /// not a letter, it only fixes the comparison stream `(N-1)^inf`.
    pub fn expansion_of_one(&self, max_len: usize) -> Result<ExpansionOfOne> {
        if max_len == 0 {
            return Err(domain_err!("maxLen must be at least 1"));
        }
        let field = match &self.kind {
            Kind::Integer(n) => return Ok(ExpansionOfOne::Finite { digits: vec![*n] }),
            Kind::Algebraic(f) => f,
        };
        let mut field = field.lock().expect("field lock");
        let mut seen: Vec<FieldElem> = Vec::new();
        let mut digits = Vec::new();
        let mut r = field.from_rational(BigRational::one());
        for _ in 0..max_len {
            let br = field.mul_beta(&r);
            let d = field.floor(&br)?;
            digits.push(d.to_u32().ok_or_else(|| Error::Precision("digit overflow".into()))?);
            r = field.sub_integer(&br, &d);
            if r.is_zero() {
                return Ok(ExpansionOfOne::Finite { digits });
            }
            if let Some(k) = seen.iter().position(|s| *s == r) {
                // r = T^{k+1}(1) = T^{len}(1)
                return Ok(ExpansionOfOne::Periodic {
                    preperiod: digits[..k + 1].to_vec(),
                    period: digits[k + 1..].to_vec(),
                });
            }
            seen.push(r.clone());
        }
        Ok(ExpansionOfOne::Undetected)
    }

    /// The quasi-greedy expansion of 1 split into `(preperiod, period)`.
    ///
    /// A finite `d1..dk` becomes `(d1..d_{k-1}(dk - 1))^inf`. Every suffix of
    /// an admissible word is lexicographically at most this stream.
    pub fn comparison_stream(&self) -> Result<(Vec<Letter>, Vec<Letter>)> {
        let to_letters = |v: &[u32]| -> Vec<Letter> { v.iter().map(|&d| d as Letter).collect() };
        match &self.one {
            ExpansionOfOne::Finite { digits } => {
                let mut per: Vec<u32> = digits.clone();
                *per.last_mut().expect("nonempty") -= 1;
                Ok((Vec::new(), to_letters(&per)))
            }
            ExpansionOfOne::Periodic { preperiod, period } => Ok((to_letters(preperiod), to_letters(period))),
            ExpansionOfOne::Undetected => {
                Err(Error::Unsupported("expansion of 1 is not eventually periodic within the search length".into()))
            }
        }
    }

    /// Orbit points `T^k(1)` for `k` below preperiod + period length of the
    /// comparison stream; index 0 is 1 itself.
    pub fn orbit_of_one(&self) -> Result<Vec<f64>> {
        let (pre, per) = self.comparison_stream()?;
        let len = pre.len() + per.len();
        match &self.kind {
            Kind::Integer(_) => Ok(vec![1.0; len]),
            Kind::Algebraic(field) => {
                let mut field = field.lock().expect("field lock");
                let mut r = field.from_rational(BigRational::one());
                let mut out = Vec::with_capacity(len);
                for _ in 0..len {
                    out.push(field.to_f64(&r));
                    let br = field.mul_beta(&r);
                    let d = field.floor(&br)?;
                    r = field.sub_integer(&br, &d);
                }
                Ok(out)
            }
        }
    }

    /// Greedy digits of `x` in `[0, 1]`.
    pub(crate) fn greedy_digits(&self, x: &BigRational, n: usize) -> Result<Vec<Letter>> {
        match &self.kind {
            Kind::Integer(base) => {
                let base = BigInt::from(*base);
                if x.is_one() {
                    return Ok(vec![(self.alphabet.size() - 1) as Letter; n]);
                }
                let mut r = x.clone();
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    let br = r * BigRational::from_integer(base.clone());
                    let d = br.floor().to_integer();
                    out.push(d.to_u8().expect("digit below base"));
                    r = br - BigRational::from_integer(d);
                }
                Ok(out)
            }
            Kind::Algebraic(field) => {
                let mut field = field.lock().expect("field lock");
                let mut r = field.from_rational(x.clone());
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    let br = field.mul_beta(&r);
                    let d = field.floor(&br)?;
                    out.push(d.to_u8().ok_or_else(|| Error::Precision("digit out of range".into()))?);
                    r = field.sub_integer(&br, &d);
                    if r.is_zero() {
                        out.resize(n, 0);
                        break;
                    }
                }
                Ok(out)
            }
        }
    }
}

impl PartialEq for BetaSystem {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions_of_one() {
        assert_eq!(BetaSystem::golden().one(), &ExpansionOfOne::Finite { digits: vec![1, 1] });
        assert_eq!(BetaSystem::silver().one(), &ExpansionOfOne::Finite { digits: vec![2, 1] });
        assert_eq!(BetaSystem::integer(3).unwrap().one(), &ExpansionOfOne::Finite { digits: vec![3] });
    }

    #[test]
    fn periodic_expansion() {
        // beta = (3 + sqrt 5)/2 has d(1) = 2 1 1 1 ...
        let b = BetaSystem::algebraic(vec![1, -3, 1], [2.61, 2.62]).unwrap();
        assert_eq!(
            b.one(),
            &ExpansionOfOne::Periodic { preperiod: vec![2], period: vec![1] }
        );
        assert_eq!(b.comparison_stream().unwrap(), (vec![2], vec![1]));
    }

    #[test]
    fn idempotent_in_search_length() {
        let b = BetaSystem::silver();
        let short = b.expansion_of_one(2).unwrap();
        for len in [3, 10, 64] {
            assert_eq!(b.expansion_of_one(len).unwrap(), short);
        }
    }

    #[test]
    fn alphabet_sizes() {
        assert_eq!(BetaSystem::silver().alphabet().size(), 3);
        assert_eq!(BetaSystem::golden().alphabet().size(), 2);
    }

    #[test]
    fn descriptor_round_trip() {
        let b = BetaSystem::from_json(r#"{"kind":"algebraic","minpoly":[-1,-2,1],"interval":[2.41,2.42]}"#)
            .unwrap();
        assert_eq!(b, BetaSystem::silver());
        let n = BetaSystem::from_json(r#"{"kind":"integer","N":3}"#).unwrap();
        assert_eq!(n.integer_base(), Some(3));
        assert!(BetaSystem::from_json(r#"{"kind":"integer","N":1}"#).is_err());
        assert!(matches!(BetaSystem::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn orbit_points() {
        let o = BetaSystem::silver().orbit_of_one().unwrap();
        assert_eq!(o.len(), 2);
        assert!((o[1] - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }
}
