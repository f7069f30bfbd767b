//! Benchmarks only; run them with `cargo bench -p avoidance-bench`.
