//! Criterion benchmarks for `qfound-core`; see `benches/`.
