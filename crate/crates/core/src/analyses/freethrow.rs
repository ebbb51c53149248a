//! Serial correlation between the first two free-throw attempts of a trip.

use std::collections::BTreeMap;

use super::{league_summary, AnalysisError, LeagueSummary};
use crate::ingest::FreeThrowTrip;
use crate::stats::{
    benjamini_hochberg, corr_test, pearson_r, Alternative, IntervalMethod, StatError,
};
use crate::tabular::{Cell, Tabular};

/// One player's first-versus-second-attempt analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeThrowRow {
    pub player_id: String,
    pub player_name: String,
    pub trips: usize,
    /// P̂(make second | made first) with its trip count.
    pub p_hit_given_hit: f64,
    pub n_hit_first: usize,
    /// P̂(make second | missed first) with its trip count.
    pub p_hit_given_miss: f64,
    pub n_miss_first: usize,
    /// Serial correlation between first and second attempt outcomes.
    pub r: f64,
    /// One-sided (greater) p-value.
    pub p_value: f64,
    pub significant: bool,
    pub bh_rejected: bool,
}

#[derive(Debug, Clone)]
pub struct FreeThrowAnalysis {
    /// Sorted by trip count descending, ties by player id.
    pub rows: Vec<FreeThrowRow>,
    pub summary: LeagueSummary,
    /// Players with fewer than two trips.
    pub excluded_few_trips: usize,
    /// Players whose first or second attempts never vary, leaving the
    /// correlation undefined.
    pub excluded_zero_variance: usize,
}

/// Test every player's serial correlation between the first two attempts of
/// their trips against `H1: r > 0`.
///
/// Players need at least two trips and nondegenerate attempt outcomes; the
/// two exclusion reasons are reported separately. For players with exactly
/// two usable trips the t transform has no degrees of freedom, so the exact
/// two-point permutation p-value (0.5 for r = +1, 1 for r = -1) is used.
pub fn free_throw_analysis(
    trips: &[FreeThrowTrip],
    alpha: f64,
    intervals: IntervalMethod,
) -> Result<FreeThrowAnalysis, AnalysisError> {
    let mut by_player: BTreeMap<&str, Vec<&FreeThrowTrip>> = BTreeMap::new();
    for trip in trips {
        by_player.entry(&trip.player_id).or_default().push(trip);
    }

    let mut rows = Vec::new();
    let mut excluded_few_trips = 0usize;
    let mut excluded_zero_variance = 0usize;
    for (player_id, player_trips) in by_player {
        if player_trips.len() < 2 {
            excluded_few_trips += 1;
            continue;
        }
        let first: Vec<f64> = player_trips
            .iter()
            .map(|t| f64::from(u8::from(t.outcomes[0])))
            .collect();
        let second: Vec<f64> = player_trips
            .iter()
            .map(|t| f64::from(u8::from(t.outcomes[1])))
            .collect();
        let r = match pearson_r(&first, &second) {
            Ok(r) => r,
            Err(StatError::ZeroVariance) => {
                excluded_zero_variance += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let n = player_trips.len();
        let p_value = if n == 2 {
            if r > 0.0 {
                0.5
            } else {
                1.0
            }
        } else {
            corr_test(r, n, Alternative::Greater)?.p_value
        };

        let hit_first: Vec<&&FreeThrowTrip> =
            player_trips.iter().filter(|t| t.outcomes[0]).collect();
        let miss_first: Vec<&&FreeThrowTrip> =
            player_trips.iter().filter(|t| !t.outcomes[0]).collect();
        let second_rate = |ts: &[&&FreeThrowTrip]| {
            ts.iter().filter(|t| t.outcomes[1]).count() as f64 / ts.len() as f64
        };
        rows.push(FreeThrowRow {
            player_id: player_id.to_string(),
            player_name: player_trips[0].player_name.clone(),
            trips: n,
            p_hit_given_hit: second_rate(&hit_first),
            n_hit_first: hit_first.len(),
            p_hit_given_miss: second_rate(&miss_first),
            n_miss_first: miss_first.len(),
            r,
            p_value,
            significant: p_value <= alpha,
            bh_rejected: false,
        });
    }

    let p_values: Vec<f64> = rows.iter().map(|r| r.p_value).collect();
    for idx in benjamini_hochberg(&p_values, alpha) {
        rows[idx].bh_rejected = true;
    }
    let summary = league_summary(
        &p_values,
        excluded_few_trips + excluded_zero_variance,
        alpha,
        intervals,
    );
    rows.sort_by(|a, b| {
        b.trips
            .cmp(&a.trips)
            .then_with(|| a.player_id.cmp(&b.player_id))
    });
    Ok(FreeThrowAnalysis {
        rows,
        summary,
        excluded_few_trips,
        excluded_zero_variance,
    })
}

impl Tabular for FreeThrowRow {
    fn headers() -> &'static [&'static str] {
        &[
            "Player",
            "Trips",
            "P(H2|H1)",
            "N(H1)",
            "P(H2|M1)",
            "N(M1)",
            "r",
            "P-value",
            "Significant",
            "BH-Rejected",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Str(self.player_name.clone()),
            Cell::Int(self.trips as i64),
            Cell::Mean(self.p_hit_given_hit),
            Cell::Int(self.n_hit_first as i64),
            Cell::Mean(self.p_hit_given_miss),
            Cell::Int(self.n_miss_first as i64),
            Cell::Stat(self.r),
            Cell::PValue(self.p_value),
            Cell::Flag(self.significant),
            Cell::Flag(self.bh_rejected),
        ]
    }
}
