//! Criterion benchmarks for `mvbell`; see `benches/`.
