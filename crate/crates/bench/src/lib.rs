//! Criterion benchmarks for the `uelr-core` kernels; see `benches/kernels.rs`.
