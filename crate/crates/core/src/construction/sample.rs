use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::build::Construction;
use crate::beta::StateSet;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::shift::Letter;
use crate::specification::ChainBuilder;

/// How the free blocks `a_k^(j)` are drawn from `Gamma(nu, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Selector {
    /// Round robin over `Gamma` in lexicographic order.
    #[default]
    Deterministic,
    Seeded { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Fixed,
    Gamma,
    Glue,
}

/// `count` adjacent blocks of one kind and length starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRun {
    pub kind: BlockKind,
    pub j: u32,
    pub start: u64,
    pub len: u64,
    pub count: u64,
}

/// Positions `l_{n_j}^(j)` and `l_0^(j+1)` of one stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub j: u32,
    pub fixed_end: u64,
    pub stage_end: u64,
}

/// One explicit element prefix with its block structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledPrefix {
    #[serde(skip)]
    pub word: Vec<Letter>,
    pub runs: Vec<BlockRun>,
    pub checkpoints: Vec<Checkpoint>,
    /// Indices into `Gamma(nu, j)` in emission order.
    #[serde(skip)]
    pub choices: Vec<u32>,
}

fn push_run(runs: &mut Vec<BlockRun>, kind: BlockKind, j: u32, start: u64, len: u64) {
    if len == 0 {
        return;
    }
    if let Some(r) = runs.last_mut() {
        if r.kind == kind && r.j == j && r.len == len && r.start + r.len * r.count == start {
            r.count += 1;
            return;
        }
    }
    runs.push(BlockRun { kind, j, start, len, count: 1 });
}

/// Emits `omega_1 ⊙ ... ⊙ a_1^(1) ⊙ ...` through `stages` stages, picking
/// each free block so that the prefix stays in the recorded block set.
pub fn sample_prefix(
    inst: &Instance,
    c: &Construction,
    stages: u32,
    selector: Selector,
) -> Result<SampledPrefix> {
    if stages as usize > c.stages.len() {
        return Err(Error::Construction(format!("only {} stages were built", c.stages.len())));
    }
    let table = &inst.table;
    let aut = &inst.automaton;
    let total = c.stages[..stages as usize].last().map_or(0, |s| s.ell_end);
    let mut chain = ChainBuilder::with_capacity(table, total as usize);
    let mut runs = Vec::new();
    let mut choices = Vec::new();
    let mut checkpoints = Vec::new();
    let mut rng = match selector {
        Selector::Seeded { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Selector::Deterministic => None,
    };
    for stage in &c.stages[..stages as usize] {
        let j = stage.j;
        let omega = c.omega_block(j);
        let omega_readable = aut.readable_from(omega);
        let words = &stage.gamma.words;
        let readable: Vec<StateSet> = words.iter().map(|w| aut.readable_from(w)).collect();
        let width = stage.width();
        let mut pointer = 0usize;
        for i in 1..=width {
            let expect = stage.length_at(i);
            let start = chain.len() as u64;
            if i <= stage.n_j {
                let g = chain.push_with(omega, omega_readable)? as u64;
                push_run(&mut runs, BlockKind::Glue, j, start, g);
                push_run(&mut runs, BlockKind::Fixed, j, start + g, j as u64);
            } else {
                let k0 = match rng.as_mut() {
                    Some(r) => r.random_range(0..words.len()),
                    None => pointer,
                };
                let pick = (0..words.len()).map(|t| (k0 + t) % words.len()).find(|&g| {
                    chain.peek(readable[g]).is_some_and(|v| start + (v.len() + words[g].len()) as u64 == expect)
                });
                let g = pick.ok_or_else(|| {
                    Error::Construction(format!("stage {j}, index {i}: no free block reaches length {expect}"))
                })?;
                let conn = chain.push_with(&words[g], readable[g])? as u64;
                push_run(&mut runs, BlockKind::Glue, j, start, conn);
                push_run(&mut runs, BlockKind::Gamma, j, start + conn, j as u64);
                choices.push(g as u32);
                pointer = (g + 1) % words.len();
            }
            if chain.len() as u64 != expect {
                return Err(Error::Construction(format!(
                    "stage {j}, index {i}: prefix length {} differs from l_i = {expect}",
                    chain.len()
                )));
            }
        }
        checkpoints.push(Checkpoint { j, fixed_end: stage.ell_nj, stage_end: stage.ell_end });
    }
    Ok(SampledPrefix { word: chain.into_letters(), runs, checkpoints, choices })
}

/// Reads the free-block choices back from a prefix and its runs, checking
/// every fixed block against `omega_j`.
pub fn decode_prefix(c: &Construction, word: &[Letter], runs: &[BlockRun]) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for r in runs {
        for k in 0..r.count {
            let s = (r.start + k * r.len) as usize;
            let block = word
                .get(s..s + r.len as usize)
                .ok_or_else(|| Error::Parse("annotation runs past the end of the word".into()))?;
            match r.kind {
                BlockKind::Glue => {}
                BlockKind::Fixed => {
                    if block != c.omega_block(r.j) {
                        return Err(Error::Parse(format!("fixed block at {s} is not omega_{}", r.j)));
                    }
                }
                BlockKind::Gamma => {
                    let stage = c
                        .stages
                        .get(r.j as usize - 1)
                        .ok_or_else(|| Error::Parse(format!("no stage {}", r.j)))?;
                    let g = stage
                        .gamma
                        .words
                        .binary_search_by(|w| w.letters().cmp(block))
                        .map_err(|_| Error::Parse(format!("block at {s} is not in Gamma({})", r.j)))?;
                    out.push(g as u32);
                }
            }
        }
    }
    Ok(out)
}

