//! Benchmark-only crate; the timings live under `benches/`.
