//! Criterion benchmarks for the secant engine; see `benches/`.
