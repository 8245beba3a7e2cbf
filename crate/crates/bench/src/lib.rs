//! Criterion benchmarks for symlift live in `benches/`; run with
//! `cargo bench -p symlift-bench`.
