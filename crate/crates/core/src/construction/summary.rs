//! Block sets stored by automaton profile instead of word by word.
//!
//! Every word of a block set has the same length, so a word is described for
//! the construction by its profile (end state from each start state), which
//! fixes both its cylinder mass and every later connector. Each profile class
//! keeps its cardinality and the range of tracked digit counts.

use std::collections::HashMap;

use crate::beta::{LanguageAutomaton, Profile, StateSet};
use crate::shift::{Letter, Word};
use crate::specification::GluingTable;

use super::tally::Tally;


fn digit_counts(word: &[Letter], digits: [Letter; 2]) -> [u64; 2] {
    let mut c = [0; 2];
    for &a in word {
        for k in 0..2 {
            if a == digits[k] {
                c[k] += 1;
            }
        }
    }
    c
}

fn add(a: [u64; 2], b: [u64; 2]) -> [u64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

#[derive(Debug, Default)]
pub(crate) struct ProfileTable {
    profiles: Vec<Profile>,
    index: HashMap<Profile, u32>,
}

impl ProfileTable {
    pub fn intern(&mut self, p: Profile) -> u32 {
        if let Some(&id) = self.index.get(&p) {
            return id;
        }
        let id = self.profiles.len() as u32;
        self.profiles.push(p.clone());
        self.index.insert(p, id);
        id
    }

    pub fn get(&self, id: u32) -> &Profile {
        &self.profiles[id as usize]
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Class {
    pub pid: u32,
    pub count: Tally,
    pub lo: [u64; 2],
    pub hi: [u64; 2],
}

#[derive(Debug, Clone)]
pub(crate) struct Summary {
    pub len: u64,
    pub classes: Vec<Class>,
}

impl Summary {
    /// `{ε}`.
    pub fn empty_word(aut: &LanguageAutomaton, profiles: &mut ProfileTable) -> Self {
        let pid = profiles.intern(aut.profile(&[]));
        Summary { len: 0, classes: vec![Class { pid, count: Tally::one(), lo: [0; 2], hi: [0; 2] }] }
    }

    pub fn total(&self, limit: u64) -> Tally {
        let mut it = self.classes.iter();
        let first = it.next().expect("nonempty summary").count.clone();
        it.fold(first, |acc, c| acc.add(&c.count, limit))
    }
}

/// Words of one length with identical readable set and profile.
#[derive(Debug, Clone)]
struct Group {
    readable: StateSet,
    profile: Profile,
    count: u64,
    lo: [u64; 2],
    hi: [u64; 2],
}

#[derive(Debug, Clone)]
struct Edge {
    delta: u64,
    target: u32,
    count: Tally,
    lo: [u64; 2],
    hi: [u64; 2],
}

/// The `⊙ X` step for a fixed family `X` of equal-length words.
#[derive(Debug)]
pub(crate) struct Kernel {
    word_len: u64,
    groups: Vec<Group>,
    cache: HashMap<u32, Vec<Edge>>,
}

impl Kernel {
    pub fn new(aut: &LanguageAutomaton, words: &[Word], digits: [Letter; 2]) -> Self {
        let mut groups: Vec<Group> = Vec::new();
        let mut index: HashMap<(StateSet, Profile), usize> = HashMap::new();
        for w in words {
            let readable = aut.readable_from(w);
            let profile = aut.profile(w);
            let c = digit_counts(w, digits);
            match index.get(&(readable, profile.clone())) {
                Some(&k) => {
                    let g = &mut groups[k];
                    g.count += 1;
                    for (d, &k) in c.iter().enumerate() {
                        g.lo[d] = g.lo[d].min(k);
                        g.hi[d] = g.hi[d].max(k);
                    }
                }
                None => {
                    index.insert((readable, profile.clone()), groups.len());
                    groups.push(Group { readable, profile, count: 1, lo: c, hi: c });
                }
            }
        }
        let word_len = words.first().map_or(0, |w| w.len() as u64);
        Kernel { word_len, groups, cache: HashMap::new() }
    }

    fn edges(&mut self, pid: u32, table: &GluingTable, profiles: &mut ProfileTable, digits: [Letter; 2]) -> &[Edge] {
        if !self.cache.contains_key(&pid) {
            let aut = table.automaton();
            let src = profiles.get(pid).clone();
            let end = src[0].expect("block words are readable from the initial state");
            let mut edges = Vec::with_capacity(self.groups.len());
            for g in &self.groups {
                let conn = table.connector(end, g.readable).expect("strongly connected");
                let composed: Profile = src
                    .iter()
                    .map(|q| q.and_then(|q| aut.run(q, conn)).and_then(|r| g.profile[r as usize]))
                    .collect();
                let cd = digit_counts(conn, digits);
                edges.push(Edge {
                    delta: conn.len() as u64 + self.word_len,
                    target: profiles.intern(composed),
                    count: Tally::from_u64(g.count),
                    lo: add(cd, g.lo),
                    hi: add(cd, g.hi),
                });
            }
            self.cache.insert(pid, edges);
        }
        &self.cache[&pid]
    }

    /// Applies `B ⊙ X` and keeps the most populous length class, the shorter
    /// one on ties. Returns the new summary and the number of length classes
    /// that were discarded.
    pub fn step(
        &mut self,
        b: &Summary,
        table: &GluingTable,
        profiles: &mut ProfileTable,
        digits: [Letter; 2],
        limit: u64,
    ) -> (Summary, usize) {
        let mut acc: Vec<(u64, Class)> = Vec::new();
        for class in &b.classes {
            let edges = self.edges(class.pid, table, profiles, digits).to_vec();
            for e in edges {
                let count = class.count.mul(&e.count, limit);
                let lo = add(class.lo, e.lo);
                let hi = add(class.hi, e.hi);
                match acc.iter_mut().find(|(d, c)| *d == e.delta && c.pid == e.target) {
                    Some((_, c)) => {
                        c.count = c.count.add(&count, limit);
                        for d in 0..2 {
                            c.lo[d] = c.lo[d].min(lo[d]);
                            c.hi[d] = c.hi[d].max(hi[d]);
                        }
                    }
                    None => acc.push((e.delta, Class { pid: e.target, count, lo, hi })),
                }
            }
        }
        let mut deltas: Vec<u64> = acc.iter().map(|(d, _)| *d).collect();
        deltas.sort_unstable();
        deltas.dedup();
        let mut best: Option<(u64, Tally)> = None;
        for &d in &deltas {
            let mut it = acc.iter().filter(|(x, _)| *x == d).map(|(_, c)| &c.count);
            let first = it.next().expect("delta present").clone();
            let total = it.fold(first, |t, c| t.add(c, limit));
            if best.as_ref().is_none_or(|(_, bt)| total.compare(bt).is_gt()) {
                best = Some((d, total));
            }
        }
        let (delta, _) = best.expect("nonempty step");
        let mut classes: Vec<Class> = acc.into_iter().filter(|(d, _)| *d == delta).map(|(_, c)| c).collect();
        classes.sort_by_key(|c| c.pid);
        (Summary { len: b.len + delta, classes }, deltas.len() - 1)
    }
}

/// Simulated chain `x ⊙ w ⊙ w ⊙ ...` from a fixed end state: added length and
/// tracked digit counts after each copy.
pub(crate) struct FixedChain<'a> {
    table: &'a GluingTable,
    word: &'a [Letter],
    readable: StateSet,
    state: u32,
    digits: [Letter; 2],
    word_digits: [u64; 2],
    pub added: u64,
    pub counts: [u64; 2],
}

impl<'a> FixedChain<'a> {
    pub fn new(table: &'a GluingTable, word: &'a [Letter], state: u32, digits: [Letter; 2]) -> Self {
        let readable = table.automaton().readable_from(word);
        Self {
            table,
            word,
            readable,
            state,
            digits,
            word_digits: digit_counts(word, digits),
            added: 0,
            counts: [0; 2],
        }
    }

    pub fn push(&mut self) {
        let conn = self.table.connector(self.state, self.readable).expect("strongly connected");
        let aut = self.table.automaton();
        let s = aut.run(self.state, conn).expect("connector");
        self.state = aut.run(s, self.word).expect("readable");
        self.added += conn.len() as u64 + self.word.len() as u64;
        self.counts = add(add(self.counts, digit_counts(conn, self.digits)), self.word_digits);
    }
}
