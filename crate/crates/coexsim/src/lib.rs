//! Command-line companion to [`coexsim_core`]: scenario files, experiment
//! runners, and deterministic output formats.
//!
//! The core crate holds the math — channels, projectors, beampatterns,
//! detection. This crate adds everything that touches the outside world:
//!
//! - [`scenario_file`]: TOML serialization of scenarios with a canonical
//!   byte form and a SHA-256 digest over it;
//! - [`runner`]: wiring from a scenario plus a nulling method to swept
//!   patterns, detection curves, and suppression ratios;
//! - [`outputs`]: CSV and report rendering with fixed float formatting,
//!   so repeated runs of the same scenario are byte-identical;
//! - [`error`]: process-facing error kinds mapped to exit codes.
//!
//! The binary in `src/main.rs` exposes all of it as `coexsim
//! {beampattern,detection,all}`.

pub mod error;
pub mod outputs;
pub mod runner;
pub mod scenario_file;
