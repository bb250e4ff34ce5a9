//! A laboratory for proof-of-work difficulty algorithms.
//!
//! - [`da`]: btc2016, cw144, the EDA composite and NEFDA.
//! - [`miners`]: the loyal/greedy/variable hash-rate supply model.
//! - [`sim`]: a seeded, event-driven mining simulator.
//! - [`analysis`]: throughput buckets, deserts and spikes, autocorrelation,
//!   hash-rate estimators, DARI ratios and miner shares.
//! - [`io`]: CSV and config file formats.
//! - [`cli`]: the `powlab` command line.
//!
//! See `examples/` for one runnable program per capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod da;
pub mod error;
pub mod io;
pub mod miners;
pub mod sim;

pub use error::{Error, Result};
