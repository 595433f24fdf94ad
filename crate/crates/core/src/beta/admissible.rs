use super::system::BetaSystem;
use crate::error::Result;
use crate::shift::Letter;

/// The first `n` letters of `pre per per ...`.
fn stream_prefix(pre: &[Letter], per: &[Letter], n: usize) -> Vec<Letter> {
    pre.iter().copied().chain(per.iter().copied().cycle()).take(n).collect()
}

/// Parry's criterion on a finite word: every suffix is lexicographically at
/// most the comparison stream, compared over the suffix length. A suffix
/// equal to a prefix of the stream is allowed.
pub fn is_admissible(word: &[Letter], system: &BetaSystem) -> Result<bool> {
    let (pre, per) = system.comparison_stream()?;
    if word.iter().any(|&a| !system.alphabet().contains(a)) {
        return Ok(false);
    }
    let stream = stream_prefix(&pre, &per, word.len());
    Ok((0..word.len()).all(|k| {
        let suffix = &word[k..];
        suffix <= &stream[..suffix.len()]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{all_words, Word};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let three = BetaSystem::integer(3).unwrap();
        for word in all_words(three.alphabet(), 4) {
            assert!(is_admissible(&word, &three).unwrap());
        }
        let silver = BetaSystem::silver();
        assert!(!is_admissible(&w("22"), &silver).unwrap());
        assert!(is_admissible(&w("20"), &silver).unwrap());
        assert!(!is_admissible(&w("21"), &silver).unwrap());
        assert!(is_admissible(&w("1202"), &silver).unwrap());
        assert!(is_admissible(&w("2020"), &silver).unwrap());
    }

    #[test]
    fn golden_forbids_consecutive_ones() {
        let golden = BetaSystem::golden();
        assert!(!is_admissible(&w("0110"), &golden).unwrap());
        assert!(is_admissible(&w("1010"), &golden).unwrap());
    }

    #[test]
    fn letters_outside_the_alphabet() {
        assert!(!is_admissible(&[3], &BetaSystem::silver()).unwrap());
    }
}
