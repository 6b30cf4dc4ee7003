//! Benchmarks for `tensor-spectra`; see `benches/kernels.rs`.
