//! Criterion benchmarks for impulse-core live under `benches/`.
