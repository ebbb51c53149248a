//! Streak-structure detection for binary make/miss sequences.
//!
//! The crate is organized in four layers:
//!
//! - [`ingest`]: parse shot logs and free-throw tables into per-player,
//!   per-game ordered sequences and free-throw trips.
//! - [`stats`]: pure statistical kernels (runs-test moments, disjoint-pair
//!   estimators, correlation and two-sample tests, false-discovery control).
//! - [`analyses`]: league-level analyses composed from the kernels, emitting
//!   table-shaped report rows and summaries.
//! - [`simulate`]: a seeded, counter-keyed Monte Carlo engine that sweeps a
//!   streakiness parameter and re-runs the detectors to estimate power.
//!
//! All analysis and simulation entry points are deterministic functions of
//! their inputs and configuration.

pub mod analyses;
pub mod ingest;
pub mod rng;
pub mod simulate;
pub mod stats;
pub mod tabular;
