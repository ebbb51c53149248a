//! Per-player runs tests aggregated across games, with a league summary.

use super::{league_summary, AnalysisError, LeagueSummary};
use crate::ingest::PlayerSequences;
use crate::stats::{
    aggregate_runs_test, benjamini_hochberg, Alternative, IntervalMethod, RunsStats,
};
use crate::tabular::{Cell, Tabular};

/// One player's aggregated runs test.
#[derive(Debug, Clone, PartialEq)]
pub struct RunsRow {
    pub player_id: String,
    pub player_name: String,
    /// Games with a usable (nonzero-variance) runs statistic.
    pub games: usize,
    /// Makes over usable games only, matching the statistic's population.
    pub makes: usize,
    pub misses: usize,
    /// Observed runs summed over usable games.
    pub runs: usize,
    /// Null expectation summed over usable games.
    pub expected_runs: f64,
    pub z: f64,
    pub p_value: f64,
    pub significant: bool,
    pub bh_rejected: bool,
}

#[derive(Debug, Clone)]
pub struct RunsAnalysis {
    /// Sorted by z ascending (streakiest first), ties by player id.
    pub rows: Vec<RunsRow>,
    pub summary: LeagueSummary,
}

/// Run the aggregated runs test for every player.
///
/// Games where the run count has zero null variance (all makes, all misses,
/// or a single make and miss) carry no information and are skipped; players
/// with no usable games at all are excluded and counted in the summary.
pub fn runs_analysis(
    sequences: &PlayerSequences,
    alpha: f64,
    alternative: Alternative,
    intervals: IntervalMethod,
) -> Result<RunsAnalysis, AnalysisError> {
    let mut rows = Vec::new();
    let mut excluded = 0usize;
    for (player_id, seqs) in sequences {
        let per_game: Vec<RunsStats> = seqs
            .iter()
            .map(|s| RunsStats::from_outcomes(&s.outcomes))
            .collect();
        let test = match aggregate_runs_test(&per_game, alternative) {
            Ok(t) => t,
            Err(_) => {
                excluded += 1;
                continue;
            }
        };
        let usable: Vec<&RunsStats> = per_game.iter().filter(|g| g.variance_runs > 0.0).collect();
        rows.push(RunsRow {
            player_id: player_id.clone(),
            player_name: seqs[0].player_name.clone(),
            games: usable.len(),
            makes: usable.iter().map(|g| g.n1 as usize).sum(),
            misses: usable.iter().map(|g| g.n2 as usize).sum(),
            runs: usable.iter().map(|g| g.runs as usize).sum(),
            expected_runs: usable.iter().map(|g| g.expected_runs).sum(),
            z: test.statistic,
            p_value: test.p_value,
            significant: test.p_value <= alpha,
            bh_rejected: false,
        });
    }

    let p_values: Vec<f64> = rows.iter().map(|r| r.p_value).collect();
    for idx in benjamini_hochberg(&p_values, alpha) {
        rows[idx].bh_rejected = true;
    }
    let summary = league_summary(&p_values, excluded, alpha, intervals);
    rows.sort_by(|a, b| {
        a.z.total_cmp(&b.z)
            .then_with(|| a.player_id.cmp(&b.player_id))
    });
    Ok(RunsAnalysis { rows, summary })
}

impl Tabular for RunsRow {
    fn headers() -> &'static [&'static str] {
        &[
            "Player",
            "Games",
            "Makes",
            "Misses",
            "Runs",
            "Expected Runs",
            "Z",
            "P-value",
            "Significant",
            "BH-Rejected",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Str(self.player_name.clone()),
            Cell::Int(self.games as i64),
            Cell::Int(self.makes as i64),
            Cell::Int(self.misses as i64),
            Cell::Int(self.runs as i64),
            Cell::Stat(self.expected_runs),
            Cell::Stat(self.z),
            Cell::PValue(self.p_value),
            Cell::Flag(self.significant),
            Cell::Flag(self.bh_rejected),
        ]
    }
}
