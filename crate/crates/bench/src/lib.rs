//! Criterion benchmarks for the icoflux pipeline live in `benches/`.
