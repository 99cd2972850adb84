//! Batch experiment driver for the reconstruction toolkit: test-signal
//! generators, flat-text experiment configs, a per-seed pipeline runner, and
//! the named table reproductions.

pub mod bench;
pub mod config;
pub mod runner;
pub mod signals;
