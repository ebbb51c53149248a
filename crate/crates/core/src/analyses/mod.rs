//! League-level analyses composed from the statistical kernels.
//!
//! Each analysis is a deterministic function of its inputs and configuration
//! and emits table-shaped rows plus a summary. Row-level p-values are fed to
//! the false-discovery procedure exactly as reported, with no intermediate
//! rounding.

mod behavior;
mod freethrow;
mod global;
mod halftime;
mod runs;

pub use behavior::{
    behavior_analysis, BehaviorFilters, BehaviorMetric, BehaviorRow, BehaviorSummary,
};
pub use freethrow::{free_throw_analysis, FreeThrowAnalysis, FreeThrowRow};
pub use global::{global_hot_hand, GlobalHotHand, PairRow};
pub use halftime::{halftime_analysis, HalftimeRow, HalftimeWindow};
pub use runs::{runs_analysis, RunsAnalysis, RunsRow};

use thiserror::Error;

use crate::stats::{
    benjamini_hochberg, null_significance_band, null_significance_band_exact, proportion_ci,
    proportion_ci_exact, IntervalMethod, StatError,
};
use crate::tabular::{entry, Cell, Summary};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("no qualifying data: {0}")]
    NoQualifyingData(String),

    #[error(transparent)]
    Stat(#[from] StatError),
}

/// Confidence level used for every league-summary interval.
pub const SUMMARY_LEVEL: f64 = 0.95;

/// League-wide rollup of one analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct LeagueSummary {
    /// Players that produced a test.
    pub n_players: usize,
    /// Players excluded (degenerate or underfilled data).
    pub n_excluded: usize,
    /// Tests with `p <= alpha`.
    pub n_significant: usize,
    pub alpha: f64,
    /// How many significant tests chance alone would produce, as a count
    /// interval.
    pub null_band: (f64, f64),
    /// Interval for the significant fraction.
    pub proportion_ci: (f64, f64),
    /// Discoveries under Benjamini-Hochberg at `alpha`.
    pub bh_discoveries: usize,
}

pub(crate) fn league_summary(
    p_values: &[f64],
    n_excluded: usize,
    alpha: f64,
    intervals: IntervalMethod,
) -> LeagueSummary {
    let n_players = p_values.len();
    let n_significant = p_values.iter().filter(|&&p| p <= alpha).count();
    let (null_band, ci) = if n_players == 0 {
        ((0.0, 0.0), (0.0, 0.0))
    } else {
        match intervals {
            IntervalMethod::NormalApprox => (
                null_significance_band(n_players, alpha, SUMMARY_LEVEL),
                proportion_ci(n_significant, n_players, SUMMARY_LEVEL)
                    .expect("valid summary proportion"),
            ),
            IntervalMethod::ExactBinomial => (
                null_significance_band_exact(n_players, alpha, SUMMARY_LEVEL),
                proportion_ci_exact(n_significant, n_players, SUMMARY_LEVEL)
                    .expect("valid summary proportion"),
            ),
        }
    };
    LeagueSummary {
        n_players,
        n_excluded,
        n_significant,
        alpha,
        null_band,
        proportion_ci: ci,
        bh_discoveries: benjamini_hochberg(p_values, alpha).len(),
    }
}

impl Summary for LeagueSummary {
    fn entries(&self) -> Vec<(String, Cell)> {
        vec![
            entry("players", Cell::Int(self.n_players as i64)),
            entry("excluded", Cell::Int(self.n_excluded as i64)),
            entry("significant", Cell::Int(self.n_significant as i64)),
            entry("alpha", Cell::Stat(self.alpha)),
            entry("null_band_low", Cell::Stat(self.null_band.0)),
            entry("null_band_high", Cell::Stat(self.null_band.1)),
            entry("significant_fraction_low", Cell::Stat(self.proportion_ci.0)),
            entry(
                "significant_fraction_high",
                Cell::Stat(self.proportion_ci.1),
            ),
            entry("bh_discoveries", Cell::Int(self.bh_discoveries as i64)),
        ]
    }
}
