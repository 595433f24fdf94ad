use serde::{Deserialize, Serialize};

use crate::construction::Construction;
use crate::error::{Error, Result};
use crate::measures::ParryMeasure;

/// `y_n` and `E_n` at one flat index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub n: u64,
    pub j: u32,
    pub i: u64,
    pub len: u64,
    pub log_count: f64,
    pub log_y: f64,
    pub log_e: f64,
    /// `y_n` as `1/N^len` on integer bases.
    pub y: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionLedger {
    pub entries: Vec<LedgerEntry>,
    /// Whether every index up to the last one has an entry.
    pub complete: bool,
}

/// Collects the recorded indices. Fails if the flat decomposition does not
/// invert or if an integer-base `y_n` differs from `N^-len`.
pub fn dimension_ledger(c: &Construction, nu: &ParryMeasure) -> Result<DimensionLedger> {
    for n in 1..=c.last_flat() {
        let (j, i) = c.split_flat(n).ok_or_else(|| Error::Construction(format!("index {n} has no stage")))?;
        if c.flat_index(j, i) != n {
            return Err(Error::Construction(format!("index {n} maps to ({j}, {i}) and back elsewhere")));
        }
    }
    let mut entries = Vec::new();
    for r in c.records() {
        let (j, i) = if r.flat == 0 { (1, 0) } else { c.split_flat(r.flat).expect("checked") };
        let y = nu.integer_base().map(|b| format!("1/{b}^{}", r.len));
        if let Some(b) = nu.integer_base() {
            let exact = -(r.len as f64) * (b as f64).ln();
            if (r.log_y - exact).abs() > 1e-9 * exact.abs().max(1.0) {
                return Err(Error::Construction(format!("y at index {} is not {b}^-{}", r.flat, r.len)));
            }
        }
        entries.push(LedgerEntry { n: r.flat, j, i, len: r.len, log_count: r.log_count, log_y: r.log_y, log_e: r.log_e, y });
    }
    let complete = entries.len() as u64 == c.last_flat() + 1;
    Ok(DimensionLedger { entries, complete })
}

impl DimensionLedger {
    pub fn get(&self, n: u64) -> Option<&LedgerEntry> {
        self.entries.binary_search_by_key(&n, |e| e.n).ok().map(|k| &self.entries[k])
    }

    /// `y_n` nonincreasing and `E_n` nondecreasing over the recorded indices.
    pub fn monotone(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].log_y <= w[0].log_y + 1e-12 && w[1].log_e >= w[0].log_e - 1e-12)
    }
}

/// `log|B_n| / -log y_n` at one stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub j: u32,
    pub n: u64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub target: f64,
    pub depth: u32,
    pub s_star: f64,
    pub trend: Vec<TrendPoint>,
    /// `|s* - target|` nonincreasing over the last three stages.
    pub monotone: bool,
}

/// The critical exponent at the deepest index of each of the first `depth`
/// stages whose successor lies in the same stage.
pub fn dimension_estimate(c: &Construction, depth: u32) -> Result<DimensionEstimate> {
    if depth == 0 || depth as usize > c.stages.len() {
        return Err(Error::Construction(format!("depth {depth} outside 1..={}", c.stages.len())));
    }
    let p = c.config.p as f64;
    let target = p / (p + 1.0);
    let trend: Vec<TrendPoint> = c.stages[..depth as usize]
        .iter()
        .map(|s| TrendPoint { j: s.j, n: s.flat_start + s.width() - 1, s: s.dimension })
        .collect();
    let tail = &trend[trend.len().saturating_sub(3)..];
    let monotone = tail.windows(2).all(|w| (w[1].s - target).abs() <= (w[0].s - target).abs());
    Ok(DimensionEstimate { target, depth, s_star: trend.last().expect("depth >= 1").s, trend, monotone })
}
