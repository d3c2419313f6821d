//! Criterion benchmarks for the twocenter kernels; see `benches/`.
