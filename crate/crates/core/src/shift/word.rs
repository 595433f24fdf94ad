use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain_err, Error, Result};

/// A single symbol. Alphabets are `{0, 1, ..., N-1}` with `N <= 256`.
pub type Letter = u8;

/// The alphabet `{0, ..., size - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    size: u16,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=256).contains(&size) {
            return Err(domain_err!("alphabet size must lie in 2..=256, got {size}"));
        }
        Ok(Self { size: size as u16 })
    }

    pub fn size(self) -> usize {
        self.size as usize
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.size).map(|a| a as Letter)
    }

    pub fn contains(self, letter: Letter) -> bool {
        (letter as u16) < self.size
    }

    /// Checks the word invariant: every letter is below the alphabet size.
    pub fn check(self, word: &[Letter]) -> Result<()> {
        match word.iter().position(|&a| !self.contains(a)) {
            None => Ok(()),
            Some(i) => Err(domain_err!(
                "letter {} at position {i} is outside an alphabet of size {}",
                word[i],
                self.size
            )),
        }
    }

    /// Serializes a word: plain digits when `N <= 10`, comma-separated
    /// integers otherwise.
    pub fn format(self, word: &[Letter]) -> String {
        if self.size <= 10 {
            word.iter().map(|&a| char::from(b'0' + a)).collect()
        } else {
            word.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    /// Inverse of [`Alphabet::format`]. Surrounding whitespace is ignored.
    pub fn parse(self, text: &str) -> Result<Word> {
        let text = text.trim();
        let letters: Vec<Letter> = if self.size <= 10 {
            text.bytes()
                .map(|b| match b {
                    b'0'..=b'9' => Ok(b - b'0'),
                    _ => Err(Error::Parse(format!("unexpected byte {:?} in word", b as char))),
                })
                .collect::<Result<_>>()?
        } else if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u16>()
                        .ok()
                        .filter(|&v| v <= 255)
                        .map(|v| v as Letter)
                        .ok_or_else(|| Error::Parse(format!("bad letter {t:?}")))
                })
                .collect::<Result<_>>()?
        };
        self.check(&letters)?;
        Ok(Word(letters))
    }
}

/// A finite word over some alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub const EMPTY: Word = Word(Vec::new());

    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<Letter>>) -> Self {
        Self(letters.into())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from_slice(&mut self, letters: &[Letter]) {
        self.0.extend_from_slice(letters);
    }

    /// The truncation `w|_n`.
    pub fn prefix(&self, n: usize) -> Result<Word> {
        if n > self.len() {
            return Err(domain_err!("prefix length {n} exceeds word length {}", self.len()));
        }
        Ok(Word(self.0[..n].to_vec()))
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(other);
        Word(out)
    }

    /// Number of occurrences of `letter`.
    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&a| a == letter).count()
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Self(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&a| a < 10) {
            for &a in &self.0 {
                write!(f, "{}", char::from(b'0' + a))?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// Parses the digit form only; use [`Alphabet::parse`] for larger alphabets.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Alphabet { size: 10 }.parse(s)
    }
}

/// Removes the first `k` letters: `S^k(w)`.
pub fn shift(word: &[Letter], k: usize) -> Result<Word> {
    if k > word.len() {
        return Err(domain_err!("cannot shift a word of length {} by {k}", word.len()));
    }
    Ok(Word(word[k..].to_vec()))
}

/// All words of length `n` over `alphabet`, in lexicographic order.
pub fn all_words(alphabet: Alphabet, n: usize) -> AllWords {
    AllWords { size: alphabet.size(), current: Some(vec![0; n]) }
}

pub struct AllWords {
    size: usize,
    current: Option<Vec<Letter>>,
}

impl Iterator for AllWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let out = Word(cur.clone());
        let mut next = cur;
        let mut i = next.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if (next[i] as usize) + 1 < self.size {
                next[i] += 1;
                for x in &mut next[i + 1..] {
                    *x = 0;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&w("2103"), 1).unwrap(), w("103"));
        assert_eq!(shift(&w("2103"), 0).unwrap(), w("2103"));
        assert_eq!(shift(&w("2103"), 4).unwrap(), Word::new());
        assert!(matches!(shift(&w("2103"), 5), Err(Error::Domain(_))));
    }

    #[test]
    fn prefix_is_truncation() {
        let word = w("0120");
        assert_eq!(word.prefix(2).unwrap(), w("01"));
        assert!(word.prefix(5).is_err());
    }

    #[test]
    fn serialization_switches_format_above_ten_letters() {
        let small = Alphabet::new(3).unwrap();
        assert_eq!(small.format(&[0, 1, 2]), "012");
        assert_eq!(small.parse("012").unwrap(), Word::from_letters(vec![0, 1, 2]));
        assert!(small.parse("013").is_err());

        let big = Alphabet::new(12).unwrap();
        assert_eq!(big.format(&[11, 0, 10]), "11,0,10");
        assert_eq!(big.parse("11,0,10").unwrap(), Word::from_letters(vec![11, 0, 10]));
        assert_eq!(big.parse("").unwrap(), Word::new());
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(257).is_err());
        assert_eq!(Alphabet::new(256).unwrap().letters().count(), 256);
    }

    #[test]
    fn enumerates_in_lex_order() {
        let words: Vec<String> = all_words(Alphabet::new(2).unwrap(), 2).map(|w| w.to_string()).collect();
        assert_eq!(words, ["00", "01", "10", "11"]);
        assert_eq!(all_words(Alphabet::new(3).unwrap(), 0).count(), 1);
    }
}
