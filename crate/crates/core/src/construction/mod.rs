//! The recursive block construction: `Gamma(nu, n)` families, the schedule
//! `n_j`, the block sets `B_i^(j)` and explicit prefixes.

mod build;
mod gamma;
mod materialize;
mod sample;
mod summary;
mod tally;

pub use build::{build_construction, Construction, ConstructionConfig, IndexRecord, BoundSummary, LengthRun, Stage};
pub use gamma::{deviation, gamma_family, EpsilonPolicy, GammaFamily};
pub use materialize::{materialize, Level};
pub use sample::{decode_prefix, sample_prefix, BlockKind, BlockRun, Checkpoint, SampledPrefix, Selector};
pub use tally::{Tally, DEFAULT_EXACT_BITS};
