//! Gluing admissible words with bounded connectors.

use std::collections::VecDeque;

use serde::Serialize;

use crate::beta::{LanguageAutomaton, State, StateSet};
use crate::error::{domain_err, Error, Result};
use crate::shift::{Letter, Word};

/// Shortest, then lexicographically smallest, connecting word between every
/// ordered pair of automaton states.
#[derive(Debug, Clone)]
pub struct GluingTable {
    automaton: LanguageAutomaton,
    constant: usize,
    paths: Vec<Vec<Word>>,
}

/// One row of the table dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectorRow {
    pub from: State,
    pub to: State,
    pub connector: String,
}

/// Runs a breadth-first search from every state, letters in ascending order.
/// FIFO order makes the first path found to a state the lexicographically
/// smallest among the shortest ones.
pub fn build_gluing_table(automaton: &LanguageAutomaton) -> Result<GluingTable> {
    let n = automaton.num_states();
    let mut paths = Vec::with_capacity(n);
    let mut constant = 0;
    for s in 0..n as State {
        let mut found: Vec<Option<Word>> = vec![None; n];
        found[s as usize] = Some(Word::new());
        let mut queue = VecDeque::from([s]);
        while let Some(q) = queue.pop_front() {
            for a in automaton.alphabet().letters() {
                if let Some(t) = automaton.step(q, a) {
                    if found[t as usize].is_none() {
                        let mut p = found[q as usize].clone().expect("visited");
                        p.push(a);
                        found[t as usize] = Some(p);
                        queue.push_back(t);
                    }
                }
            }
        }
        let row: Vec<Word> = found
            .into_iter()
            .enumerate()
            .map(|(t, p)| {
                p.ok_or_else(|| {
                    Error::Specification(format!("state {t} is unreachable from state {s}"))
                })
            })
            .collect::<Result<_>>()?;
        constant = constant.max(row.iter().map(|p| p.len()).max().unwrap_or(0));
        paths.push(row);
    }
    Ok(GluingTable { automaton: automaton.clone(), constant, paths })
}

impl GluingTable {
    pub fn automaton(&self) -> &LanguageAutomaton {
        &self.automaton
    }

    /// The specification constant `C`.
    pub fn constant(&self) -> usize {
        self.constant
    }

    pub fn path(&self, from: State, to: State) -> &Word {
        &self.paths[from as usize][to as usize]
    }

    /// Connector from `from` into any state of `targets`.
    pub fn connector(&self, from: State, targets: StateSet) -> Option<&Word> {
        targets
            .iter()
            .filter(|&t| (t as usize) < self.paths.len())
            .map(|t| self.path(from, t))
            .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
    }

    /// The connector `v` with `a v b` admissible.
    pub fn connector_for(&self, a: &[Letter], b: &[Letter]) -> Result<&Word> {
        let s = self.automaton.run(0, a).ok_or_else(|| domain_err!("left word is not admissible"))?;
        if !self.automaton.accepts(b) {
            return Err(domain_err!("right word is not admissible"));
        }
        let targets = self.automaton.readable_from(b);
        Ok(self.connector(s, targets).expect("initial state reads every admissible word"))
    }

    pub fn rows(&self) -> Vec<ConnectorRow> {
        let mut out = Vec::new();
        for (s, row) in self.paths.iter().enumerate() {
            for (t, p) in row.iter().enumerate() {
                out.push(ConnectorRow { from: s as State, to: t as State, connector: p.to_string() });
            }
        }
        out
    }
}

/// `a ⊙ b = a v b`.
pub fn glue(a: &[Letter], b: &[Letter], table: &GluingTable) -> Result<Word> {
    let v = table.connector_for(a, b)?;
    let mut out = Word::from(a);
    out.extend_from_slice(v);
    out.extend_from_slice(b);
    Ok(out)
}

/// Left fold of [`glue`], returning the connector length used at each join.
pub fn glue_chain(words: &[Word], table: &GluingTable) -> Result<(Word, Vec<usize>)> {
    let mut chain = ChainBuilder::new(table);
    let mut lens = Vec::with_capacity(words.len().saturating_sub(1));
    for (k, w) in words.iter().enumerate() {
        let c = chain.push(w)?;
        if k > 0 {
            lens.push(c);
        }
    }
    Ok((chain.into_word(), lens))
}

/// Incremental gluing that only tracks the current automaton state.
#[derive(Debug, Clone)]
pub struct ChainBuilder<'a> {
    table: &'a GluingTable,
    buf: Vec<Letter>,
    state: State,
}

impl<'a> ChainBuilder<'a> {
    pub fn new(table: &'a GluingTable) -> Self {
        Self { table, buf: Vec::new(), state: table.automaton.initial() }
    }

    pub fn with_capacity(table: &'a GluingTable, cap: usize) -> Self {
        Self { table, buf: Vec::with_capacity(cap), state: table.automaton.initial() }
    }

    pub fn state(&self) -> State {
        self.state
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.buf
    }

    /// Connector that [`ChainBuilder::push`] would insert before `word`.
    pub fn peek(&self, readable: StateSet) -> Option<&'a Word> {
        self.table.connector(self.state, readable)
    }

    /// Appends the connector and `word`; returns the connector length.
    /// The first word is appended without a connector.
    pub fn push(&mut self, word: &[Letter]) -> Result<usize> {
        let readable = self.table.automaton.readable_from(word);
        if readable.is_empty() {
            return Err(domain_err!("word is not admissible"));
        }
        self.push_with(word, readable)
    }

    /// As [`ChainBuilder::push`] with a precomputed readable set.
    pub fn push_with(&mut self, word: &[Letter], readable: StateSet) -> Result<usize> {
        let aut = &self.table.automaton;
        let v: &Word = if self.buf.is_empty() {
            if !readable.contains(aut.initial()) {
                return Err(domain_err!("word is not admissible"));
            }
            static EMPTY: Word = Word::EMPTY;
            &EMPTY
        } else {
            self.table.connector(self.state, readable).ok_or_else(|| domain_err!("word is not admissible"))?
        };
        let s = aut.run(self.state, v).expect("connector path");
        self.state = aut.run(s, word).ok_or_else(|| domain_err!("word is not readable after connector"))?;
        self.buf.extend_from_slice(v);
        self.buf.extend_from_slice(word);
        Ok(v.len())
    }

    /// Appends letters with no connector; fails if they are not readable.
    pub fn push_raw(&mut self, word: &[Letter]) -> Result<()> {
        self.state = self
            .table
            .automaton
            .run(self.state, word)
            .ok_or_else(|| domain_err!("letters are not readable in the current state"))?;
        self.buf.extend_from_slice(word);
        Ok(())
    }

    pub fn into_word(self) -> Word {
        Word::from(self.buf)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::{build_automaton, is_admissible, BetaSystem};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn full_shift_has_empty_connectors() {
        let a = build_automaton(&BetaSystem::integer(3).unwrap()).unwrap();
        let t = build_gluing_table(&a).unwrap();
        assert_eq!(t.constant(), 0);
        assert_eq!(glue(&w("01"), &w("22"), &t).unwrap(), w("0122"));
        let (chain, lens) = glue_chain(&[w("0"), w("0"), w("0")], &t).unwrap();
        assert_eq!(chain, w("000"));
        assert_eq!(lens, [0, 0]);
    }

    #[test]
    fn silver_connectors() {
        let system = BetaSystem::silver();
        let a = build_automaton(&system).unwrap();
        let t = build_gluing_table(&a).unwrap();
        assert_eq!(t.constant(), 1);
        assert!(t.constant() <= a.num_states());
        assert_eq!(glue(&w("2"), &w("2"), &t).unwrap(), w("202"));
        assert_eq!(glue(&w("2"), &w("02"), &t).unwrap(), w("202"));
        assert_eq!(glue(&Word::new(), &w("2"), &t).unwrap(), w("2"));
        assert!(glue(&w("22"), &w("0"), &t).is_err());
        assert_eq!(t.rows().len(), 4);
        for x in 1..=3 {
            for y in 1..=3 {
                for left in a.enumerate(x) {
                    for right in a.enumerate(y) {
                        let g = glue(&left, &right, &t).unwrap();
                        assert!(is_admissible(&g, &system).unwrap());
                        assert!(g.len() - x - y <= t.constant());
                    }
                }
            }
        }
    }
}
