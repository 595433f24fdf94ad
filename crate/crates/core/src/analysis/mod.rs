//! Frequency traces, limit points, the dimension ledger and cover sums.

mod connectors;
mod cover;
mod ledger;
mod trace;

pub use connectors::{connector_negligibility, ConnectorCheck};
pub use cover::{check_cover, cover_bound, cover_suite, cover_sum, log_cover_sum, random_cover, CoverRecord, CoverSuite};
pub use ledger::{dimension_estimate, dimension_ledger, DimensionEstimate, DimensionLedger, LedgerEntry, TrendPoint};
pub use trace::{frequency_trace, limit_point_scan, CheckpointValue, FrequencyTrace, LimitScan, ScanPolicy, Verdict};
