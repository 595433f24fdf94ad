use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::system::BetaSystem;
use crate::error::{domain_err, Error, Result};
use crate::shift::Word;

/// First `n` greedy digits of `x` in `[0, 1]`.
///
/// Integer bases use exact rationals. Algebraic bases work in `Q(beta)` with
/// certified floors, so a digit is either correct or a precision error.
/// For `x = 1` an integer base returns `(N-1)^n`, since the greedy digit `N`
/// is not a letter.
pub fn beta_expand(x: &BigRational, system: &BetaSystem, n: usize) -> Result<Word> {
    if x.is_negative() || x > &BigRational::one() {
        return Err(domain_err!("x = {x} lies outside [0, 1]"));
    }
    if n == 0 {
        return Err(domain_err!("digit count must be at least 1"));
    }
    Ok(Word::from(system.greedy_digits(x, n)?))
}

/// Parses `p/q`, an integer or a finite decimal into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(numer, denom);
    Ok(if neg { -q } else { q })
}

/// `sum_k d_k beta^{-k}` in double precision.
pub fn evaluate_digits(digits: &[u8], beta: f64) -> f64 {
    digits.iter().rev().fold(0.0, |acc, &d| (acc + d as f64) / beta)
}
