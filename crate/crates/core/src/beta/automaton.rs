use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::system::BetaSystem;
use crate::error::{Error, Result};
use crate::shift::{Alphabet, Letter, Word};

pub type State = u32;

/// Largest automaton handled; state sets are 64-bit masks.
pub const MAX_STATES: usize = 64;

/// A set of automaton states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct StateSet(pub u64);

impl StateSet {
    pub fn all(n: usize) -> Self {
        Self(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn contains(self, s: State) -> bool {
        self.0 >> s & 1 == 1
    }

    pub fn insert(&mut self, s: State) {
        self.0 |= 1 << s;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = State> {
        (0..64).filter(move |&s| self.contains(s))
    }
}

/// End state of a word from every start state (`None` where unreadable).
pub type Profile = Vec<Option<State>>;

/// Deterministic follower automaton of a beta-shift; every state accepts
/// and state 0 is initial.
///
/// State `k` means the current suffix matches the first `k` letters of the
/// comparison stream; it corresponds to the orbit point `T^k(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguageAutomaton {
    alphabet: Alphabet,
    states: usize,
    table: Vec<Option<State>>,
}

/// Builds the follower automaton from the comparison stream of `system`.
pub fn build_automaton(system: &BetaSystem) -> Result<LanguageAutomaton> {
    let (pre, per) = system.comparison_stream()?;
    let states = pre.len() + per.len();
    if states > MAX_STATES {
        return Err(Error::Unsupported(format!("{states} automaton states exceed {MAX_STATES}")));
    }
    let stream: Vec<Letter> = pre.iter().chain(&per).copied().collect();
    let alphabet = system.alphabet();
    let n = alphabet.size();
    let mut table = vec![None; states * n];
    for (i, &c) in stream.iter().enumerate() {
        let next = if i + 1 < states { i + 1 } else { pre.len() };
        for a in alphabet.letters() {
            table[i * n + a as usize] = match a.cmp(&c) {
                std::cmp::Ordering::Less => Some(0),
                std::cmp::Ordering::Equal => Some(next as State),
                std::cmp::Ordering::Greater => None,
            };
        }
    }
    Ok(LanguageAutomaton { alphabet, states, table })
}

impl LanguageAutomaton {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> State {
        0
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::all(self.states)
    }

    #[inline]
    pub fn step(&self, s: State, a: Letter) -> Option<State> {
        if (a as usize) >= self.alphabet.size() {
            return None;
        }
        self.table[s as usize * self.alphabet.size() + a as usize]
    }

    pub fn run(&self, s: State, word: &[Letter]) -> Option<State> {
        word.iter().try_fold(s, |s, &a| self.step(s, a))
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.run(0, word).is_some()
    }

    pub fn profile(&self, word: &[Letter]) -> Profile {
        (0..self.states as State).map(|s| self.run(s, word)).collect()
    }

    /// States from which `word` can be read.
    pub fn readable_from(&self, word: &[Letter]) -> StateSet {
        let mut set = StateSet::default();
        for s in 0..self.states as State {
            if self.run(s, word).is_some() {
                set.insert(s);
            }
        }
        set
    }

    /// `{s : step(s, a) in target}`.
    pub fn preimage(&self, a: Letter, target: StateSet) -> StateSet {
        let mut set = StateSet::default();
        for s in 0..self.states as State {
            if self.step(s, a).is_some_and(|t| target.contains(t)) {
                set.insert(s);
            }
        }
        set
    }

    /// `M[s][t]` = number of letters leading from `s` to `t`.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0; self.states]; self.states];
        for (s, row) in m.iter_mut().enumerate() {
            for a in self.alphabet.letters() {
                if let Some(t) = self.step(s as State, a) {
                    row[t as usize] += 1;
                }
            }
        }
        m
    }

    /// Number of accepted words of length `n`.
    pub fn count(&self, n: usize) -> BigUint {
        let adj = self.adjacency();
        let mut v = vec![BigUint::zero(); self.states];
        v[0] = BigUint::from(1u32);
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); self.states];
            for (s, vs) in v.iter().enumerate() {
                if vs.is_zero() {
                    continue;
                }
                for (t, &m) in adj[s].iter().enumerate() {
                    if m > 0 {
                        next[t] += vs * m;
                    }
                }
            }
            v = next;
        }
        v.into_iter().sum()
    }

    /// All accepted words of length `n` in lexicographic order.
    pub fn enumerate(&self, n: usize) -> Vec<Word> {
        if n == 0 {
            return vec![Word::new()];
        }
        // split on the first letter so the branches can run in parallel
        let firsts: Vec<Letter> = self.alphabet.letters().collect();
        firsts
            .par_iter()
            .filter_map(|&a| self.step(0, a).map(|s| (a, s)))
            .map(|(a, s)| {
                let mut out = Vec::new();
                let mut buf = vec![a];
                self.extend(s, n, &mut buf, &mut out);
                out
            })
            .flatten()
            .collect()
    }

    fn extend(&self, s: State, n: usize, buf: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if buf.len() == n {
            out.push(Word::from(buf.as_slice()));
            return;
        }
        for a in self.alphabet.letters() {
            if let Some(t) = self.step(s, a) {
                buf.push(a);
                self.extend(t, n, buf, out);
                buf.pop();
            }
        }
    }

    /// Checks determinism-related structure: every state reachable from the
    /// initial state and every state has a successor.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.states];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for a in self.alphabet.letters() {
                if let Some(t) = self.step(s as State, a) {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        stack.push(t as usize);
                    }
                }
            }
        }
        if let Some(s) = seen.iter().position(|&x| !x) {
            return Err(Error::Model(format!("state {s} is unreachable")));
        }
        for s in 0..self.states {
            if self.alphabet.letters().all(|a| self.step(s as State, a).is_none()) {
                return Err(Error::Model(format!("state {s} has no outgoing transition")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::is_admissible;
    use crate::shift::all_words;

    #[test]
    fn full_shift_is_one_state() {
        let a = build_automaton(&BetaSystem::integer(3).unwrap()).unwrap();
        assert_eq!(a.num_states(), 1);
        for l in 0..3 {
            assert_eq!(a.step(0, l), Some(0));
        }
        assert_eq!(a.enumerate(2).len(), 9);
        assert_eq!(a.enumerate(0), vec![Word::new()]);
    }

    #[test]
    fn silver_counts() {
        let a = build_automaton(&BetaSystem::silver()).unwrap();
        a.validate().unwrap();
        assert_eq!(a.num_states(), 2);
        let counts: Vec<u64> = (1..=5).map(|n| a.count(n).try_into().unwrap()).collect();
        assert_eq!(counts, [3, 7, 17, 41, 99]);
        let words: Vec<String> = a.enumerate(2).iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["00", "01", "02", "10", "11", "12", "20"]);
    }

    #[test]
    fn agrees_with_lexicographic_check() {
        for system in [BetaSystem::silver(), BetaSystem::golden()] {
            let a = build_automaton(&system).unwrap();
            for n in 0..=6 {
                for w in all_words(system.alphabet(), n) {
                    assert_eq!(a.accepts(&w), is_admissible(&w, &system).unwrap(), "{w}");
                }
            }
        }
    }

    #[test]
    fn preimages() {
        let a = build_automaton(&BetaSystem::silver()).unwrap();
        let all = a.all_states();
        assert_eq!(a.preimage(0, all), all);
        assert_eq!(a.preimage(2, all), StateSet(0b01));
        assert_eq!(a.readable_from(&[2]), StateSet(0b01));
        assert_eq!(a.profile(&[0]), vec![Some(0), Some(0)]);
    }
}
