//! Criterion benchmarks for spinrep; see `benches/`.
