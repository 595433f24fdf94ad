//! Benchmarks for the pnn pipeline live in `benches/`.
