//! Benchmarks for sdmds; see `benches/`.
