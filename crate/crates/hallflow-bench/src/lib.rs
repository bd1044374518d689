//! Benchmark-only crate; see `benches/hotpaths.rs`.

pub use hallflow_core;
