//! Seeded Monte Carlo engine for power analysis.
//!
//! Synthetic leagues are generated from real (or synthetic) player profiles
//! under a quarter-level streakiness mixture, then the same detectors used on
//! real data are re-run to see how large the effect must be before they fire.
//! Every random draw comes from a counter-keyed stream, so sweeps are
//! bit-identical across thread counts and execution orders.

mod engine;
mod power;
mod profile;

pub use engine::{
    quarter_probability, simulate_run, DetectorOutputs, QuarterProb, SimGame, SimPlayer,
    SimulationRun,
};
pub use power::{power_summary, sweep, DeltaSummary, PowerCurve, PowerPoint, PowerSummary};
pub use profile::{
    extract_profiles, read_roster, write_roster, PlayerProfile, ProfileExtraction, ScheduleSlot,
};

use thiserror::Error;

/// Default discovery-count threshold marking a significant sweep point.
pub const DEFAULT_DISCOVERY_THRESHOLD: f64 = 22.0;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("empty roster")]
    EmptyRoster,

    #[error("streakiness delta {0} outside [0, 1)")]
    InvalidDelta(f64),

    #[error("player probability {0} outside (0, 1)")]
    InvalidProbability(f64),

    #[error("malformed roster: {0}")]
    Roster(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
