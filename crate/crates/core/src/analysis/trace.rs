use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::construction::Checkpoint;
use crate::error::{domain_err, Result};
use crate::shift::Letter;

/// Running frequencies `P_d(w, m)` for `1 <= m <= |w|`, stored as a rank
/// bitvector so that long prefixes stay cheap.
#[derive(Debug, Clone)]
pub struct FrequencyTrace {
    digit: Letter,
    len: u64,
    bits: Vec<u64>,
    /// Occurrences before each 64-letter block.
    ranks: Vec<u64>,
    checkpoints: Vec<Checkpoint>,
}

pub fn frequency_trace(word: &[Letter], digit: Letter) -> Result<FrequencyTrace> {
    if word.is_empty() {
        return Err(domain_err!("a frequency trace needs a nonempty word"));
    }
    let mut bits = Vec::with_capacity(word.len().div_ceil(64));
    let mut ranks = Vec::with_capacity(bits.capacity());
    let mut seen = 0u64;
    for chunk in word.chunks(64) {
        let mut b = 0u64;
        for (k, &a) in chunk.iter().enumerate() {
            if a == digit {
                b |= 1 << k;
            }
        }
        ranks.push(seen);
        seen += b.count_ones() as u64;
        bits.push(b);
    }
    Ok(FrequencyTrace { digit, len: word.len() as u64, bits, ranks, checkpoints: Vec::new() })
}

impl FrequencyTrace {
    /// Attaches the checkpoints of a constructed prefix. Checkpoints past the
    /// end of the trace are dropped.
    pub fn with_checkpoints(mut self, checkpoints: &[Checkpoint]) -> Self {
        self.checkpoints = checkpoints.iter().copied().filter(|c| c.fixed_end >= 1 && c.fixed_end <= self.len).collect();
        self
    }

    pub fn digit(&self) -> Letter {
        self.digit
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    /// Occurrences of the digit among the first `m` letters.
    pub fn count(&self, m: u64) -> u64 {
        assert!(m <= self.len, "position {m} beyond trace of length {}", self.len);
        let (q, r) = ((m / 64) as usize, m % 64);
        if r == 0 {
            return if q < self.ranks.len() { self.ranks[q] } else { self.total() };
        }
        self.ranks[q] + (self.bits[q] & ((1u64 << r) - 1)).count_ones() as u64
    }

    fn total(&self) -> u64 {
        self.ranks.last().copied().unwrap_or(0) + self.bits.last().map_or(0, |b| b.count_ones() as u64)
    }

    /// `P_d(w, m)` exactly.
    pub fn value(&self, m: u64) -> Ratio<u64> {
        assert!(m >= 1);
        Ratio::new(self.count(m), m)
    }

    pub fn value_f64(&self, m: u64) -> f64 {
        self.count(m) as f64 / m as f64
    }

    /// `(m, P_d(w, m))` for every `stride`-th position and the last one.
    pub fn samples(&self, stride: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        let stride = stride.max(1);
        (1..=self.len)
            .filter(move |m| m % stride == 0 || *m == self.len)
            .map(|m| (m, self.value_f64(m)))
    }

    /// Smallest and largest value over `lo <= m <= hi`.
    pub fn range(&self, lo: u64, hi: u64) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut c = self.count(lo.max(1) - 1);
        for m in lo.max(1)..=hi.min(self.len) {
            let k = (m - 1) as usize;
            c += (self.bits[k / 64] >> (k % 64)) & 1;
            let v = c as f64 / m as f64;
            min = min.min(v);
            max = max.max(v);
        }
        (min, max)
    }
}

/// Thresholds for [`limit_point_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPolicy {
    pub tolerance: f64,
    /// Fraction of the trace, at its end, whose oscillation is measured.
    pub window: f64,
    pub min_len: u64,
}

impl Default for ScanPolicy {
    fn default() -> Self {
        Self { tolerance: 0.05, window: 0.2, min_len: 100 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Trace values at one stage's checkpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckpointValue {
    pub j: u32,
    pub fixed_end: u64,
    pub at_fixed_end: f64,
    pub stage_end: Option<u64>,
    pub at_stage_end: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitScan {
    pub digit: Letter,
    pub verdict: Verdict,
    /// Accumulation value estimates: one for a convergent trace, two for a
    /// divergent one.
    pub estimates: Vec<f64>,
    pub final_value: f64,
    /// `max - min` over the final window.
    pub oscillation: f64,
    pub window_min: f64,
    pub window_max: f64,
    pub checkpoints: Vec<CheckpointValue>,
}

/// Compares the trace along the two checkpoint subsequences of the deepest
/// stage and measures its oscillation over the final window.
pub fn limit_point_scan(trace: &FrequencyTrace, policy: ScanPolicy) -> LimitScan {
    let m = trace.len();
    let final_value = trace.value_f64(m);
    let lo = ((m as f64) * (1.0 - policy.window)).floor() as u64;
    let (window_min, window_max) = trace.range(lo.max(1), m);
    let oscillation = window_max - window_min;
    let checkpoints: Vec<CheckpointValue> = trace
        .checkpoints()
        .iter()
        .map(|c| {
            let stage_end = (c.stage_end <= m).then_some(c.stage_end);
            CheckpointValue {
                j: c.j,
                fixed_end: c.fixed_end,
                at_fixed_end: trace.value_f64(c.fixed_end),
                stage_end,
                at_stage_end: stage_end.map(|e| trace.value_f64(e)),
            }
        })
        .collect();
    let mut scan = LimitScan {
        digit: trace.digit(),
        verdict: Verdict::Inconclusive,
        estimates: Vec::new(),
        final_value,
        oscillation,
        window_min,
        window_max,
        checkpoints,
    };
    if m < policy.min_len {
        return scan;
    }
    let deepest = scan.checkpoints.iter().rev().find(|c| c.at_stage_end.is_some());
    match deepest {
        Some(c) => {
            let (a, b) = (c.at_fixed_end, c.at_stage_end.expect("filtered"));
            if (a - b).abs() > policy.tolerance {
                scan.verdict = Verdict::Divergent;
                scan.estimates = vec![a, b];
            } else if oscillation <= policy.tolerance {
                scan.verdict = Verdict::Convergent;
                scan.estimates = vec![final_value];
            }
        }
        None => {
            if oscillation <= policy.tolerance {
                scan.verdict = Verdict::Convergent;
                scan.estimates = vec![final_value];
            }
        }
    }
    scan
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_and_absent() {
        let w: Vec<u8> = (0..200).map(|k| (k % 2) as u8).collect();
        let t = frequency_trace(&w, 0).unwrap();
        let head: Vec<Ratio<u64>> = (1..=4).map(|m| t.value(m)).collect();
        assert_eq!(head, [Ratio::new(1, 1), Ratio::new(1, 2), Ratio::new(2, 3), Ratio::new(1, 2)]);
        assert_eq!(t.count(200), 100);
        assert_eq!(t.count(128), 64);
        let t = frequency_trace(&[2, 2, 2], 0).unwrap();
        assert!((1..=3).all(|m| t.count(m) == 0));
        assert!(frequency_trace(&[], 0).is_err());
    }

    #[test]
    fn constant_third_is_convergent() {
        let w: Vec<u8> = (0..3000).map(|k| (k % 3) as u8).collect();
        let s = limit_point_scan(&frequency_trace(&w, 1).unwrap(), ScanPolicy::default());
        assert_eq!(s.verdict, Verdict::Convergent);
        assert!((s.estimates[0] - 1.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn short_trace_is_inconclusive() {
        let s = limit_point_scan(&frequency_trace(&[0, 1, 2], 1).unwrap(), ScanPolicy::default());
        assert_eq!(s.verdict, Verdict::Inconclusive);
    }
}
