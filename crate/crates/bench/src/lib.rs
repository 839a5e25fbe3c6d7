//! Criterion benchmarks for the hyperrational workspace live under `benches/`.
