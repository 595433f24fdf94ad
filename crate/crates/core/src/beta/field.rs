use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain_err, Error, Result};

/// Bisection steps allowed before a floor is declared uncertifiable.
pub const MAX_REFINEMENTS: usize = 4096;

/// `Q(beta)` for a real algebraic `beta` given by its minimal polynomial and
/// an isolating interval.
///
/// Elements are coefficient vectors on the basis `1, beta, ..., beta^{d-1}`;
/// equality of elements is exact equality of coefficients.
#[derive(Debug, Clone)]
pub struct NumberField {
    /// Monic minimal polynomial, constant term first.
    monic: Vec<BigRational>,
    lo: BigRational,
    hi: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem(Vec<BigRational>);

impl NumberField {
    pub fn new(minpoly: &[i64], lo: BigRational, hi: BigRational) -> Result<Self> {
        let lead = *minpoly
            .iter()
            .rev()
            .find(|&&c| c != 0)
            .ok_or_else(|| domain_err!("minimal polynomial is zero"))?;
        let degree = minpoly.iter().rposition(|&c| c != 0).unwrap_or(0);
        if degree == 0 {
            return Err(domain_err!("minimal polynomial must have positive degree"));
        }
        let lead = BigRational::from_integer(lead.into());
        let monic = minpoly[..=degree]
            .iter()
            .map(|&c| BigRational::from_integer(c.into()) / &lead)
            .collect();
        if lo >= hi {
            return Err(domain_err!("isolating interval must satisfy lo < hi"));
        }
        let mut field = Self { monic, lo, hi };
        let sl = field.eval_poly(&field.lo).signum();
        let sh = field.eval_poly(&field.hi).signum();
        if sl.is_zero() || sh.is_zero() {
            // a rational root sits on an endpoint; collapse onto it
            let root = if sl.is_zero() { field.lo.clone() } else { field.hi.clone() };
            field.lo = root.clone();
            field.hi = root;
        } else if sl == sh {
            return Err(domain_err!("polynomial has no sign change on the isolating interval"));
        }
        let one = BigRational::one();
        for _ in 0..MAX_REFINEMENTS {
            if field.lo > one || field.hi < one || field.lo == field.hi {
                break;
            }
            field.bisect();
        }
        if field.hi <= one {
            return Err(domain_err!("the base must exceed 1"));
        }
        if field.lo <= one {
            return Err(Error::Precision("could not separate the base from 1".into()));
        }
        Ok(field)
    }

    pub fn degree(&self) -> usize {
        self.monic.len() - 1
    }

    fn eval_poly(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.monic.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// An interval of width below `2^-bits` containing beta.
    pub fn enclosure(&mut self, bits: u32) -> (BigRational, BigRational) {
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        while &self.hi - &self.lo >= width {
            self.bisect();
        }
        (self.lo.clone(), self.hi.clone())
    }

    fn bisect(&mut self) {
        if self.lo == self.hi {
            return;
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        let sm = self.eval_poly(&mid).signum();
        if sm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
        } else if sm == self.eval_poly(&self.lo).signum() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn from_rational(&self, q: BigRational) -> FieldElem {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = q;
        FieldElem(v)
    }

    pub fn beta(&self) -> FieldElem {
        let mut v = vec![BigRational::zero(); self.degree()];
        if self.degree() == 1 {
            v[0] = -self.monic[0].clone();
        } else {
            v[1] = BigRational::one();
        }
        FieldElem(v)
    }

    /// `beta * x`, reduced modulo the minimal polynomial.
    pub fn mul_beta(&self, x: &FieldElem) -> FieldElem {
        let d = self.degree();
        let top = x.0[d - 1].clone();
        let mut v = Vec::with_capacity(d);
        v.push(BigRational::zero());
        v.extend_from_slice(&x.0[..d - 1]);
        if !top.is_zero() {
            for (vi, mi) in v.iter_mut().zip(&self.monic) {
                *vi -= &top * mi;
            }
        }
        FieldElem(v)
    }

    pub fn sub_integer(&self, x: &FieldElem, m: &BigInt) -> FieldElem {
        let mut v = x.0.clone();
        v[0] -= BigRational::from_integer(m.clone());
        FieldElem(v)
    }

    /// Encloses the value of `x` using the interval `[lo, hi]` for beta.
    fn enclose(&self, x: &FieldElem, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        let mut plo = BigRational::one();
        let mut phi = BigRational::one();
        for c in &x.0 {
            if c.is_negative() {
                a += c * &phi;
                b += c * &plo;
            } else {
                a += c * &plo;
                b += c * &phi;
            }
            plo *= lo;
            phi *= hi;
        }
        (a, b)
    }

    /// Certified floor. Rational elements are floored exactly; irrational ones
    /// are enclosed with a shrinking interval until no integer separates the
    /// bounds.
    pub fn floor(&mut self, x: &FieldElem) -> Result<BigInt> {
        if x.0[1..].iter().all(Zero::is_zero) || self.lo == self.hi {
            let (a, _) = self.enclose(x, &self.lo.clone(), &self.lo.clone());
            return Ok(a.floor().to_integer());
        }
        for _ in 0..MAX_REFINEMENTS {
            let (a, b) = self.enclose(x, &self.lo, &self.hi);
            let fa = a.floor().to_integer();
            if fa == b.floor().to_integer() && BigRational::from_integer(fa.clone() + 1) > b {
                return Ok(fa);
            }
            self.bisect();
        }
        Err(Error::Precision("floor could not be certified".into()))
    }

    /// Approximates `x` to double precision.
    pub fn to_f64(&mut self, x: &FieldElem) -> f64 {
        let tol = BigRational::new(BigInt::one(), BigInt::one() << 80usize);
        for _ in 0..MAX_REFINEMENTS {
            let (a, b) = self.enclose(x, &self.lo, &self.hi);
            if &b - &a <= tol {
                break;
            }
            self.bisect();
        }
        let (a, b) = self.enclose(x, &self.lo, &self.hi);
        rational_to_f64(&((a + b) / BigRational::from_integer(2.into())))
    }
}

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64().filter(|v| v.is_finite()) {
        if v != 0.0 || q.is_zero() {
            return v;
        }
    }
    // scale by powers of two for huge numerators and denominators
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        q.numer().clone().div_floor(&(q.denom() << shift as usize))
    } else {
        (q.numer() << (-shift) as usize).div_floor(q.denom())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn silver() -> NumberField {
        NumberField::new(&[-1, -2, 1], q(241, 100), q(242, 100)).unwrap()
    }

    #[test]
    fn beta_squared_reduces() {
        let f = silver();
        let b2 = f.mul_beta(&f.beta());
        // beta^2 = 2 beta + 1
        assert_eq!(b2.coefficients(), &[q(1, 1), q(2, 1)]);
    }

    #[test]
    fn certified_floors() {
        let mut f = silver();
        assert_eq!(f.floor(&f.beta()).unwrap(), 2.into());
        let x = f.sub_integer(&f.beta(), &2.into());
        assert_eq!(f.floor(&x).unwrap(), 0.into());
        let y = f.mul_beta(&x);
        assert!(!y.is_zero());
        assert_eq!(f.floor(&y).unwrap(), 1.into());
        assert!(f.sub_integer(&y, &1.into()).is_zero());
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(NumberField::new(&[-1, -2, 1], q(3, 1), q(4, 1)).is_err());
        assert!(NumberField::new(&[-1, -2, 1], q(2, 1), q(2, 1)).is_err());
        assert!(NumberField::new(&[0, 0], q(2, 1), q(3, 1)).is_err());
    }

    #[test]
    fn approximates_value() {
        let mut f = silver();
        let b = f.beta();
        assert!((f.to_f64(&b) - (1.0 + 2f64.sqrt())).abs() < 1e-15);
    }
}
