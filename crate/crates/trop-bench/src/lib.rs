//! Benchmark-only crate; shared generators live in `trop-core`.
