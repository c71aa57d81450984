//! Criterion benchmarks for `staircase-core`; see `benches/`.
