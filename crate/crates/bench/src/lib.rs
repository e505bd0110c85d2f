//! Criterion benchmarks for the IFE pipeline live in `benches/`.
