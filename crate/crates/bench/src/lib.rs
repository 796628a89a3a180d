//! Criterion benchmarks for the `randlind` kernels; see `benches/kernels.rs`.
