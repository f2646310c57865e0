//! Criterion benchmarks for `twisted-emission`; see `benches/`.
