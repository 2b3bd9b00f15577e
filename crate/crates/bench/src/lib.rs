//! Benchmark harness for cranklab-core; see `benches/`.
