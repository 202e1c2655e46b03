//! Criterion benchmarks for the enumeration engines; see `benches/`.
