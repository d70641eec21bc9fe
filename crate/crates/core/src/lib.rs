//! Slow-light propagation of a linearly polarised probe through a driven
//! four-level atomic vapor, and weak-measurement readout of the differential
//! group delay between its σ+ and σ− components.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atomic_response;
pub mod error;
pub mod estimation;
pub mod format;
pub mod grid;
pub mod harness;
pub mod pulse_engine;
pub mod units;
pub mod weak_measurement;

pub use error::{Error, Result};
