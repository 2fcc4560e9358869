//! Criterion benchmarks for posmap-core; see `benches/`.
