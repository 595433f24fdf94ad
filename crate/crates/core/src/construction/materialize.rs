use std::collections::BTreeMap;

use rayon::prelude::*;

use super::build::Construction;
use crate::error::Result;
use crate::instance::Instance;
use crate::shift::Word;

/// An explicit block set `B_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub flat: u64,
    pub j: u32,
    pub i: u64,
    pub len: u64,
    /// Sorted.
    pub words: Vec<Word>,
}

/// Builds `B_0, B_1, ...` word by word while the product set stays below
/// `max_words`. Independent of the profile summaries, so the two can be
/// compared.
pub fn materialize(inst: &Instance, c: &Construction, max_words: usize) -> Result<Vec<Level>> {
    let aut = &inst.automaton;
    let table = &inst.table;
    let mut levels = vec![Level { flat: 0, j: 1, i: 0, len: 0, words: vec![Word::new()] }];
    let mut flat = 0;
    'stages: for stage in &c.stages {
        let omega = vec![Word::from(c.omega_block(stage.j))];
        for i in 1..=stage.width() {
            let family = if i <= stage.n_j { &omega } else { &stage.gamma.words };
            let current = &levels.last().expect("nonempty").words;
            if current.len() * family.len() > max_words {
                break 'stages;
            }
            let readable: Vec<_> = family.iter().map(|w| aut.readable_from(w)).collect();
            let products: Vec<Word> = current
                .par_iter()
                .flat_map_iter(|x| {
                    let end = aut.run(0, x).expect("admissible");
                    family.iter().zip(&readable).map(move |(y, r)| {
                        let v = table.connector(end, *r).expect("connected");
                        let mut w = x.clone();
                        w.extend_from_slice(v);
                        w.extend_from_slice(y);
                        w
                    })
                })
                .collect();
            let mut by_len: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
            for w in products {
                by_len.entry(w.len()).or_default().push(w);
            }
            // most populous class, shortest on ties
            let (&len, _) = by_len
                .iter()
                .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
                .expect("nonempty");
            let mut words = by_len.remove(&len).expect("present");
            words.sort();
            flat += 1;
            levels.push(Level { flat, j: stage.j, i, len: len as u64, words });
        }
    }
    Ok(levels)
}
