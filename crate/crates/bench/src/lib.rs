//! Criterion benchmarks for the `hyperminhash` crate; see `benches/`.
