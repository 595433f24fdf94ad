use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

use crate::measures::log_biguint;

/// Bit length above which exact counts are traded for logarithms.
pub const DEFAULT_EXACT_BITS: u64 = 1 << 16;

/// A cardinality, exact while it fits the configured bit budget and stored as
/// its natural logarithm afterwards.
#[derive(Debug, Clone, PartialEq)]
pub enum Tally {
    Exact(BigUint),
    Log(f64),
}

impl Tally {
    pub fn one() -> Self {
        Tally::Exact(BigUint::one())
    }

    pub fn from_u64(n: u64) -> Self {
        Tally::Exact(BigUint::from(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Tally::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Tally::Exact(x) => Some(x),
            Tally::Log(_) => None,
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            Tally::Exact(x) => log_biguint(x),
            Tally::Log(l) => *l,
        }
    }

    fn clamp(self, limit: u64) -> Self {
        match self {
            Tally::Exact(x) if x.bits() > limit => Tally::Log(log_biguint(&x)),
            t => t,
        }
    }

    pub fn mul(&self, other: &Tally, limit: u64) -> Tally {
        match (self, other) {
            (Tally::Exact(a), Tally::Exact(b)) => Tally::Exact(a * b).clamp(limit),
            _ => Tally::Log(self.ln() + other.ln()),
        }
    }

    pub fn add(&self, other: &Tally, limit: u64) -> Tally {
        match (self, other) {
            (Tally::Exact(a), Tally::Exact(b)) => Tally::Exact(a + b).clamp(limit),
            _ => {
                let (x, y) = (self.ln(), other.ln());
                let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
                Tally::Log(hi + (lo - hi).exp().ln_1p())
            }
        }
    }

    pub fn compare(&self, other: &Tally) -> Ordering {
        match (self, other) {
            (Tally::Exact(a), Tally::Exact(b)) => a.cmp(b),
            _ => self.ln().total_cmp(&other.ln()),
        }
    }

    /// Decimal digits when exact.
    pub fn to_decimal(&self) -> Option<String> {
        self.exact().map(|x| x.to_str_radix(10))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn switches_to_logs_past_the_budget() {
        let a = Tally::from_u64(1 << 40);
        let b = a.mul(&a, 64);
        assert!(!b.is_exact());
        assert!((b.ln() - 80.0 * std::f64::consts::LN_2).abs() < 1e-9);
        let c = a.mul(&a, 128);
        assert!(c.is_exact());
        let d = b.add(&c, 128);
        assert!((d.ln() - 81.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(b.compare(&c), Ordering::Equal);
    }
}
