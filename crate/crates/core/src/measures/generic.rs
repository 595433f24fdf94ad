use serde::{Deserialize, Serialize};

use super::pushforward::PushforwardMeasure;
use crate::beta::LanguageAutomaton;
use crate::error::{Error, Result};
use crate::shift::{Letter, Word};
use crate::specification::{ChainBuilder, GluingTable};

/// Champernowne-style word: all admissible words in length-then-lex order,
/// glued admissibly, truncated to `len`. Generic for the Parry measure.
pub fn generic_word_nu(table: &GluingTable, len: usize) -> Result<Word> {
    generic_chain(table, len, |w| w.to_vec())
}

/// Letterwise image of [`generic_word_nu`] under `1 -> 0`.
///
/// Lowering letters keeps every suffix below the comparison stream, so the
/// image is admissible; the glued enumeration of images is kept as a
/// fallback for automata where that fails.
pub fn generic_word_mu(table: &GluingTable, len: usize) -> Result<Word> {
    let image: Vec<Letter> =
        generic_word_nu(table, len)?.iter().map(|&a| PushforwardMeasure::collapse(a)).collect();
    if table.automaton().accepts(&image) {
        return Ok(Word::from(image));
    }
    generic_chain(table, len, |w| w.iter().map(|&a| PushforwardMeasure::collapse(a)).collect())
}

fn generic_chain(table: &GluingTable, len: usize, map: impl Fn(&[Letter]) -> Vec<Letter>) -> Result<Word> {
    let aut = table.automaton();
    let mut chain = ChainBuilder::with_capacity(table, len + 64);
    let mut k = 1;
    while chain.len() < len {
        for w in aut.enumerate(k) {
            chain.push(&map(&w))?;
            if chain.len() >= len {
                break;
            }
        }
        k += 1;
    }
    let mut letters = chain.into_letters();
    letters.truncate(len);
    Ok(Word::from(letters))
}

/// Low-discrepancy word for a target letter distribution: each step takes the
/// admissible letter with the largest deficit `target[a] m - count[a]`,
/// smallest letter on ties. Letters with zero target never appear.
pub fn balanced_word(automaton: &LanguageAutomaton, target: &[f64], len: usize) -> Result<Word> {
    let mut counts = vec![0u64; target.len()];
    let mut out = Vec::with_capacity(len);
    let mut s = automaton.initial();
    for m in 1..=len {
        let mut best: Option<(f64, Letter, u32)> = None;
        for a in automaton.alphabet().letters() {
            let t = target.get(a as usize).copied().unwrap_or(0.0);
            if t <= 0.0 {
                continue;
            }
            let Some(next) = automaton.step(s, a) else { continue };
            let deficit = t * m as f64 - counts[a as usize] as f64;
            if best.is_none_or(|(d, _, _)| deficit > d + 1e-12) {
                best = Some((deficit, a, next));
            }
        }
        let (_, a, next) = best.ok_or_else(|| Error::Model("no admissible letter with positive target".into()))?;
        out.push(a);
        counts[a as usize] += 1;
        s = next;
    }
    Ok(Word::from(out))
}

/// Which generic word fixes the blocks `omega|_j` of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FixedWord {
    /// [`balanced_word`] for the single-letter masses of `mu`.
    #[default]
    Balanced,
    /// [`generic_word_mu`].
    Champernowne,
}
