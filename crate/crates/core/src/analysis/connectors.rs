use serde::{Deserialize, Serialize};

use crate::construction::{BlockKind, Construction, SampledPrefix};

/// `sum |v| / m <= k C / ((n_j + k - 1) j)` at the end of every free block,
/// with `k` counting free blocks and `v` their connectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectorCheck {
    pub checked: u64,
    pub violations: u64,
    /// Largest `(sum |v| / m)` seen.
    pub max_share: f64,
}

pub fn connector_negligibility(prefix: &SampledPrefix, c: &Construction) -> ConnectorCheck {
    let big_c = c.glue_constant as u128;
    let mut out = ConnectorCheck { checked: 0, violations: 0, max_share: 0.0 };
    let mut glue = 0u128;
    let mut k = 0u128;
    let mut stage = 0u32;
    for r in &prefix.runs {
        if r.j != stage {
            stage = r.j;
            glue = 0;
            k = 0;
        }
        let s = &c.stages[r.j as usize - 1];
        match r.kind {
            BlockKind::Glue if r.start >= s.ell_nj => glue += (r.len * r.count) as u128,
            BlockKind::Gamma => {
                let (n_j, j) = (s.n_j as u128, r.j as u128);
                for t in 0..r.count {
                    k += 1;
                    let m = (r.start + r.len * (t + 1)) as u128;
                    out.checked += 1;
                    out.max_share = out.max_share.max(glue as f64 / m as f64);
                    if glue * (n_j + k - 1) * j > k * big_c * m {
                        out.violations += 1;
                    }
                }
            }
            _ => {}
        }
    }
    out
}
