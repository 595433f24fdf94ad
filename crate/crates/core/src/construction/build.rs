use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::gamma::{gamma_family, EpsilonPolicy, GammaFamily};
use super::summary::{FixedChain, Kernel, ProfileTable, Summary};
use super::tally::{Tally, DEFAULT_EXACT_BITS};
use crate::beta::SystemDescriptor;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::measures::{balanced_word, log_biguint, generic_word_mu, FixedWord, MeasurePair};
use crate::shift::{Letter, Word};

/// Parameters of the block construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstructionConfig {
    pub p: u32,
    pub stages: u32,
    pub epsilon: EpsilonPolicy,
    /// `n_j j >= growth_base^j * l_0^(j)`.
    pub growth_base: f64,
    pub fixed_word: FixedWord,
    /// Bit budget for exact cardinalities.
    pub exact_bits: u64,
    /// Stages with at most this many indices keep a record per index.
    pub record_limit: u64,
    /// Largest `n_j` tried before giving up.
    pub n_cap: u64,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        Self {
            p: 1,
            stages: 4,
            epsilon: EpsilonPolicy::default(),
            growth_base: 2.0,
            fixed_word: FixedWord::Balanced,
            exact_bits: DEFAULT_EXACT_BITS,
            record_limit: 4096,
            n_cap: 1 << 26,
        }
    }
}

/// Bookkeeping for one block set `B_i^(j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRecord {
    pub i: u64,
    /// `(p+1) sum_{k<j} n_k + i`.
    pub flat: u64,
    pub len: u64,
    pub log_count: f64,
    /// Decimal cardinality while it is tracked exactly.
    pub count: Option<String>,
    /// `log min{nu([x]) : x in B}`.
    pub log_y: f64,
    /// Logarithm of the cardinality lower bound.
    pub log_e: f64,
    pub bound_ok: bool,
}

/// `count` consecutive indices each adding `step` letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthRun {
    pub count: u64,
    pub step: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub checked: u64,
    pub violations: u64,
    /// Smallest `log|B| - log E` seen.
    pub min_slack: f64,
    /// Whether every comparison was made on exact integers.
    pub exact: bool,
    pub first_violation: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub j: u32,
    pub n_j: u64,
    pub rho: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub gamma: GammaFamily,
    pub omega: String,
    /// Flat index of `B_0^(j)`.
    pub flat_start: u64,
    pub ell_0: u64,
    pub ell_nj: u64,
    /// `l_0^(j+1)`.
    pub ell_end: u64,
    /// Lengths for `i = 1 ..= (p+1) n_j`.
    pub lengths: Vec<LengthRun>,
    pub records: Vec<IndexRecord>,
    pub records_complete: bool,
    /// Length classes discarded by pruning over the whole stage.
    pub pruned_classes: u64,
    pub bound: BoundSummary,
    /// `l_{n_j} / l_0^(j+1)`.
    pub ratio_fixed: f64,
    /// `p n_j j / l_0^(j+1)`.
    pub ratio_gamma: f64,
    /// `l_0^(j) / (n_j j)`.
    pub growth_ratio: f64,
    /// `log|B_n| / -log y_n` at `i = (p+1) n_j - 1`, the deepest index whose
    /// successor lies in the same stage.
    pub dimension: f64,
    /// The same ratio at `B_0^(j+1)`.
    pub dimension_end: f64,
    /// `max_x |P_d(x) - mu_d|` at `i = n_j`, bounded by `2 rho`.
    pub certificate: f64,
}

impl Stage {
    /// Number of indices `(p+1) n_j`.
    pub fn width(&self) -> u64 {
        self.lengths.iter().map(|r| r.count).sum()
    }

    /// `l_i^(j)` for `0 <= i <= (p+1) n_j`.
    pub fn length_at(&self, i: u64) -> u64 {
        let mut len = self.ell_0;
        let mut left = i;
        for r in &self.lengths {
            let k = left.min(r.count);
            len += k * r.step;
            left -= k;
            if left == 0 {
                break;
            }
        }
        len
    }
}

/// A built construction: schedule, lengths, cardinalities and families.
#[derive(Debug, Clone, Serialize)]
pub struct Construction {
    pub config: ConstructionConfig,
    pub system: SystemDescriptor,
    pub glue_constant: usize,
    pub entropy: f64,
    pub pair: MeasurePair,
    pub omega: String,
    pub initial: IndexRecord,
    pub stages: Vec<Stage>,
    #[serde(skip)]
    pub(crate) omega_word: Word,
}

impl Construction {
    pub fn digits(&self) -> [Letter; 2] {
        [self.pair.divergent, self.pair.convergent]
    }

    pub fn families(&self) -> impl Iterator<Item = &GammaFamily> {
        self.stages.iter().map(|s| &s.gamma)
    }

    pub fn omega_block(&self, j: u32) -> &[Letter] {
        &self.omega_word[..j as usize]
    }

    pub fn total_length(&self) -> u64 {
        self.stages.last().map_or(0, |s| s.ell_end)
    }

    /// `(j, i)` with `1 <= i <= (p+1) n_j` for a flat index `n >= 1`.
    pub fn split_flat(&self, n: u64) -> Option<(u32, u64)> {
        let p1 = self.config.p as u64 + 1;
        let mut base = 0;
        for s in &self.stages {
            let w = p1 * s.n_j;
            if n > base && n <= base + w {
                return Some((s.j, n - base));
            }
            base += w;
        }
        None
    }

    pub fn flat_index(&self, j: u32, i: u64) -> u64 {
        let p1 = self.config.p as u64 + 1;
        p1 * self.stages.iter().take_while(|s| s.j < j).map(|s| s.n_j).sum::<u64>() + i
    }

    /// Largest flat index built.
    pub fn last_flat(&self) -> u64 {
        let p1 = self.config.p as u64 + 1;
        p1 * self.stages.iter().map(|s| s.n_j).sum::<u64>()
    }

    /// Whether every cardinality bound held.
    pub fn bounds_hold(&self) -> bool {
        self.stages.iter().all(|s| s.bound.violations == 0) && self.initial.bound_ok
    }

    /// Records over all stages in flat order.
    pub fn records(&self) -> impl Iterator<Item = &IndexRecord> {
        std::iter::once(&self.initial).chain(self.stages.iter().flat_map(|s| s.records.iter()))
    }
}

/// The cardinality bound `E = R beta^M / L` in integers, so that
/// `|B| >= E` reads `|B| L >= R beta^M`.
#[derive(Clone)]
struct ExactBound {
    l: BigUint,
    r: BigUint,
    m: u64,
}

impl ExactBound {
    /// Decides `count >= E`: exactly when `M = 0`, otherwise through log
    /// enclosures wide enough to absorb all rounding. `None` if the margin is
    /// too thin to tell.
    fn holds(&self, count: &BigUint, ln_beta: (f64, f64)) -> Option<bool> {
        if self.m == 0 {
            return Some(count * &self.l >= self.r);
        }
        let left = log_biguint(count) + log_biguint(&self.l);
        let r = log_biguint(&self.r);
        let (lo, hi) = (r + self.m as f64 * ln_beta.0, r + self.m as f64 * ln_beta.1);
        let err = 1e-12 * (left.abs() + hi.abs() + 1.0);
        if left - err > hi {
            Some(true)
        } else if left + err < lo {
            Some(false)
        } else {
            None
        }
    }
}

struct BoundState {
    base: f64,
    exact: Option<ExactBound>,
}

/// Runs the recursion for `config.stages` stages.
pub fn build_construction(inst: &Instance, config: &ConstructionConfig) -> Result<Construction> {
    if config.p == 0 || config.stages == 0 {
        return Err(Error::Construction("p and stages must be positive".into()));
    }
    let aut = &inst.automaton;
    let table = &inst.table;
    let pair = inst.pair;
    let digits = [pair.divergent, pair.convergent];
    let mu_t = [pair.mu_divergent, pair.mu_convergent];
    let nu_t = [pair.nu_divergent, pair.nu_convergent];
    let h = inst.entropy();
    let ln_c = (inst.glue_cost() as f64).ln();
    let p = config.p as u64;
    let limit = config.exact_bits;
    let ln_beta = inst.system.log_beta_enclosure();
    let c_tilde = BigUint::from(inst.glue_cost());

    let depth = config.stages as usize;
    let omega_word = match config.fixed_word {
        FixedWord::Balanced => {
            let targets: Vec<f64> = aut.alphabet().letters().map(|a| crate::shift::CylinderMeasure::mass(&inst.mu, &[a])).collect();
            balanced_word(aut, &targets, depth)?
        }
        FixedWord::Champernowne => generic_word_mu(table, depth)?,
    };

    let mut profiles = ProfileTable::default();
    let mut b = Summary::empty_word(aut, &mut profiles);
    let log_y0 = 0.0;
    let initial = IndexRecord {
        i: 0,
        flat: 0,
        len: 0,
        log_count: 0.0,
        count: Some("1".into()),
        log_y: log_y0,
        log_e: 0.0,
        bound_ok: true,
    };
    let one = BigUint::one();
    let mut carried = BoundState { base: 0.0, exact: Some(ExactBound { l: one.clone(), r: one, m: 0 }) };
    let mut stages = Vec::with_capacity(depth);
    let mut n_prev = 0u64;
    let mut flat_start = 0u64;

    let log_y = |s: &Summary, profiles: &ProfileTable| -> f64 {
        s.classes
            .iter()
            .map(|c| inst.nu.log_mass_of_profile(profiles.get(c.pid), s.len))
            .fold(f64::INFINITY, f64::min)
    };

    for j in 1..=config.stages {
        let ju = j as usize;
        let gamma = gamma_family(aut, ju, &digits, &nu_t, h, config.epsilon)?;
        let omega_j = &omega_word[..ju];
        let delta = frequency_gap(omega_j, digits, mu_t);
        let rho = gamma.epsilon.max(delta);
        let ell_0 = b.len;
        let n_j = choose_nj(inst, &b, &profiles, omega_j, digits, mu_t, rho, n_prev, config, j)?;
        let width = (p + 1) * n_j;
        let keep_all = width <= config.record_limit;
        let keep = |i: u64| keep_all || i == 1 || i == n_j || i == n_j + 1 || i + 1 >= width;

        let mut lengths: Vec<LengthRun> = Vec::new();
        let mut records = Vec::new();
        let mut pruned = 0u64;
        let mut summary = BoundSummary {
            checked: 0,
            violations: 0,
            min_slack: f64::INFINITY,
            exact: true,
            first_violation: None,
        };
        let gamma_term = j as f64 * (h - gamma.eta - ln_c / j as f64);
        let mut exact_bound = carried.exact.clone();
        let gamma_size = BigUint::from(gamma.size);
        // Gamma larger than beta^j makes eta = log|Gamma|/j - h, so each free
        // block contributes beta^(2j) / |Gamma| to the bound
        let log_gamma = (gamma.size as f64).ln();
        let over = if inst.system.integer_base().is_some() {
            Some(false)
        } else if log_gamma > j as f64 * ln_beta.1 {
            Some(true)
        } else if log_gamma < j as f64 * ln_beta.0 {
            Some(false)
        } else {
            None
        };
        if over.is_none() {
            exact_bound = None;
        }
        let mut fixed = Kernel::new(aut, &[Word::from(omega_j)], digits);
        let mut step_gamma = Kernel::new(aut, &gamma.words, digits);
        let mut certificate = 0.0;
        let mut ell_nj = ell_0;

        for i in 1..=width {
            let before = b.len;
            let (next, dropped) = if i <= n_j {
                fixed.step(&b, table, &mut profiles, digits, limit)
            } else {
                step_gamma.step(&b, table, &mut profiles, digits, limit)
            };
            b = next;
            pruned += dropped as u64;
            let step = b.len - before;
            match lengths.last_mut() {
                Some(r) if r.step == step => r.count += 1,
                _ => lengths.push(LengthRun { count: 1, step }),
            }
            if i > n_j {
                if let Some(e) = exact_bound.as_mut() {
                    e.l *= &c_tilde;
                    if over == Some(true) {
                        e.l *= &gamma_size;
                        e.m += 2 * j as u64;
                    } else {
                        e.r *= &gamma_size;
                    }
                }
                if exact_bound.as_ref().is_some_and(|e| e.l.bits().max(e.r.bits()) > limit) {
                    exact_bound = None;
                }
            }
            if i == n_j {
                ell_nj = b.len;
                certificate = b
                    .classes
                    .iter()
                    .flat_map(|c| {
                        (0..2).flat_map(move |d| {
                            [c.lo[d], c.hi[d]].map(|k| (k as f64 / b.len as f64 - mu_t[d]).abs())
                        })
                    })
                    .fold(0.0, f64::max);
            }

            let total = b.total(limit);
            let log_count = total.ln();
            let log_e = carried.base + i.saturating_sub(n_j) as f64 * gamma_term;
            let approx = log_count >= log_e - 1e-9 * log_e.abs().max(1.0);
            let ok = match (&total, &exact_bound) {
                (Tally::Exact(c), Some(e)) => e.holds(c, ln_beta).unwrap_or_else(|| {
                    summary.exact = false;
                    approx
                }),
                _ => {
                    // once the count has left exact arithmetic the bound follows
                    exact_bound = None;
                    summary.exact = false;
                    approx
                }
            };
            summary.checked += 1;
            summary.min_slack = summary.min_slack.min(log_count - log_e);
            if !ok {
                summary.violations += 1;
                summary.first_violation.get_or_insert(i);
            }
            if keep(i) {
                records.push(IndexRecord {
                    i,
                    flat: flat_start + i,
                    len: b.len,
                    log_count,
                    count: total.to_decimal(),
                    log_y: log_y(&b, &profiles),
                    log_e,
                    bound_ok: ok,
                });
            }
        }
        carried.base += (p * n_j) as f64 * gamma_term;
        carried.exact = exact_bound;

        let ell_end = b.len;
        let ratio = |r: &IndexRecord| if r.log_y < 0.0 { r.log_count / -r.log_y } else { 0.0 };
        let end = records.last().expect("final index is always kept");
        let dimension_end = ratio(end);
        let dimension = records.iter().find(|r| r.i + 1 == width).map_or(dimension_end, ratio);
        stages.push(Stage {
            j,
            n_j,
            rho,
            delta,
            epsilon: gamma.epsilon,
            eta: gamma.eta,
            omega: Word::from(omega_j).to_string(),
            gamma,
            flat_start,
            ell_0,
            ell_nj,
            ell_end,
            lengths,
            records,
            records_complete: keep_all,
            pruned_classes: pruned,
            bound: summary,
            ratio_fixed: ell_nj as f64 / ell_end as f64,
            ratio_gamma: (p * n_j * j as u64) as f64 / ell_end as f64,
            growth_ratio: ell_0 as f64 / (n_j * j as u64) as f64,
            dimension,
            dimension_end,
            certificate,
        });
        n_prev = n_j;
        flat_start += width;
    }

    Ok(Construction {
        config: config.clone(),
        system: inst.system.descriptor().clone(),
        glue_constant: inst.table.constant(),
        entropy: h,
        pair,
        omega: omega_word.to_string(),
        initial,
        stages,
        omega_word,
    })
}

/// `max_d |P_d(w) - target_d|`.
fn frequency_gap(word: &[Letter], digits: [Letter; 2], targets: [f64; 2]) -> f64 {
    super::gamma::deviation(word, &digits, &targets)
}

/// Smallest `n > n_{j-1}` with `n j >= growth^j l_0^(j)` such that every
/// word of `B_0^(j) ⊙ omega_j^{⊙n}` has tracked frequencies within `2 rho`
/// of `mu`.
#[allow(clippy::too_many_arguments)]
fn choose_nj(
    inst: &Instance,
    b0: &Summary,
    profiles: &ProfileTable,
    omega_j: &[Letter],
    digits: [Letter; 2],
    mu_t: [f64; 2],
    rho: f64,
    n_prev: u64,
    config: &ConstructionConfig,
    j: u32,
) -> Result<u64> {
    let growth = config.growth_base.powi(j as i32) * b0.len as f64 / j as f64;
    let n_min = (n_prev + 1).max(growth.ceil() as u64);
    if n_min > config.n_cap {
        return Err(Error::Schedule(format!(
            "stage {j}: growth condition needs n >= {n_min}, above the cap {}",
            config.n_cap
        )));
    }
    let mut chains: Vec<(u32, FixedChain)> = Vec::new();
    for c in &b0.classes {
        let end = profiles.get(c.pid)[0].expect("readable from the initial state");
        if !chains.iter().any(|(s, _)| *s == end) {
            chains.push((end, FixedChain::new(&inst.table, omega_j, end, digits)));
        }
    }
    let bound = 2.0 * rho + 1e-12;
    let mut worst_seen = f64::INFINITY;
    for n in 1..=config.n_cap {
        for (_, ch) in chains.iter_mut() {
            ch.push();
        }
        if n < n_min {
            continue;
        }
        let mut worst: f64 = 0.0;
        for c in &b0.classes {
            let end = profiles.get(c.pid)[0].expect("readable");
            let ch = &chains.iter().find(|(s, _)| *s == end).expect("chain").1;
            let len = (b0.len + ch.added) as f64;
            for (d, target) in mu_t.iter().enumerate() {
                for k in [c.lo[d], c.hi[d]] {
                    worst = worst.max(((k + ch.counts[d]) as f64 / len - target).abs());
                }
            }
        }
        worst_seen = worst;
        if worst <= bound {
            return Ok(n);
        }
    }
    Err(Error::Schedule(format!(
        "stage {j}: no n_j up to {} meets the 2 rho = {:.4} frequency condition (last deviation {worst_seen:.4})",
        config.n_cap,
        2.0 * rho
    )))
}
