//! Criterion benchmarks for the pcmll crate live under `benches/`.
