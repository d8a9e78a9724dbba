//! Core numerics for simulating spectrum coexistence between a ship-borne
//! MIMO radar and an onshore multi-antenna base station.
//!
//! The crate models the radar→BS interference link as a sum of rank-one
//! line-of-sight / sea-reflection terms over two uniform linear arrays,
//! builds projection matrices that steer radar energy away from that link
//! (an SVD null-space projector and a sector-blocking baseline), and
//! quantifies the cost of projection through composite transmit–receive
//! beampatterns and GLRT target-detection probabilities.
//!
//! Module map, roughly in dependency order:
//!
//! - [`linalg`] — dense complex matrices, one-sided Jacobi SVD, LU solve.
//! - [`geometry`] — array descriptions, spatial signatures, steering vectors.
//! - [`channel`] — per-element gains and the rank-one multipath channel sum.
//! - [`nulling`] — eigen-null and sector-null projectors, MVDR weights.
//! - [`waveform`] — orthogonal waveform blocks, coherence, projection.
//! - [`beampattern`] — composite transmit–receive gain and grid sweeps.
//! - [`detection`] — χ²₂ machinery, detection probability, Monte Carlo.
//! - [`scenario`] — scenario value type, presets, channel conversion.
//!
//! The crate is `no_std` (with `alloc`) so the numerics stay portable and
//! free of accidental platform dependence; all I/O lives in the companion
//! CLI crate. Every floating-point routine is deterministic: fixed
//! iteration orders, seeded counter-style RNG streams, no
//! parallelism-dependent reductions.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod beampattern;
pub mod channel;
pub mod detection;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod nulling;
pub mod scenario;
pub mod tolerances;
pub mod waveform;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
