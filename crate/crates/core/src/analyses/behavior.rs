//! Difference-of-means tests on a player's behavior after a make versus
//! after a miss.

use super::{league_summary, AnalysisError, LeagueSummary, SUMMARY_LEVEL};
use crate::ingest::{filter_min_attempts, filter_min_outcomes, PlayerSequences, PriorOutcome};
use crate::stats::{
    benjamini_hochberg, proportion_ci, proportion_ci_exact, two_sample_z, Alternative,
    IntervalMethod, StatError,
};
use crate::tabular::{entry, Cell, Summary, Tabular};

/// Which per-shot quantity is compared after makes versus after misses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BehaviorMetric {
    /// Shot distance in feet.
    ShotDistance,
    /// Game-time seconds since the player's previous attempt in the same
    /// game.
    TimeBetweenShots,
    /// Dribbles taken before the shot.
    Dribbles,
    /// Distance to the closest defender in feet.
    DefenderDistance,
}

impl BehaviorMetric {
    pub fn label(&self) -> &'static str {
        match self {
            BehaviorMetric::ShotDistance => "shot-distance",
            BehaviorMetric::TimeBetweenShots => "time-between-shots",
            BehaviorMetric::Dribbles => "dribbles",
            BehaviorMetric::DefenderDistance => "defender-distance",
        }
    }

    /// Per-metric default minimum makes/misses filter. The dribble and
    /// defender metrics require a meaningful sample on both sides.
    pub fn default_filters(&self) -> BehaviorFilters {
        match self {
            BehaviorMetric::Dribbles | BehaviorMetric::DefenderDistance => BehaviorFilters {
                min_hits: 15,
                min_misses: 15,
                min_attempts: 0,
            },
            _ => BehaviorFilters::default(),
        }
    }
}

/// Season-level inclusion thresholds applied before the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BehaviorFilters {
    pub min_hits: usize,
    pub min_misses: usize,
    pub min_attempts: usize,
}

/// One player's after-make versus after-miss comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorRow {
    pub player_id: String,
    pub player_name: String,
    pub mean_after_make: f64,
    pub sd_after_make: f64,
    pub n_after_make: usize,
    pub mean_after_miss: f64,
    pub sd_after_miss: f64,
    pub n_after_miss: usize,
    /// Two-sample z for mean(after make) - mean(after miss).
    pub z: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub significant: bool,
    pub bh_rejected: bool,
}

/// League rollup with direction counts.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorSummary {
    pub league: LeagueSummary,
    /// Players whose after-make mean exceeds their after-miss mean; the rest
    /// (ties included) count toward `n_higher_after_miss`, so the two always
    /// sum to the analyzed player count.
    pub n_higher_after_make: usize,
    pub n_higher_after_miss: usize,
    pub sig_higher_after_make: usize,
    pub sig_higher_after_miss: usize,
    pub ci_sig_higher_after_make: (f64, f64),
    pub ci_sig_higher_after_miss: (f64, f64),
}

/// Compare each player's metric after makes versus after misses with a
/// two-sided unpooled z test.
///
/// Requires sequences that have been through first-shot recoding: attempts
/// whose prior outcome is unknown (each game's first shot) belong to neither
/// group. The time metric uses the elapsed-game-time gap to the previous
/// attempt in the same game, attributed to the later shot's prior outcome;
/// gaps never span games. Players with fewer than two observations in either
/// group, or no variation in both, are excluded and counted.
pub fn behavior_analysis(
    sequences: &PlayerSequences,
    metric: BehaviorMetric,
    filters: &BehaviorFilters,
    alpha: f64,
    intervals: IntervalMethod,
) -> Result<(Vec<BehaviorRow>, BehaviorSummary), AnalysisError> {
    let filtered = filter_min_attempts(
        &filter_min_outcomes(sequences, filters.min_hits, filters.min_misses),
        filters.min_attempts,
    );

    let mut rows = Vec::new();
    let mut excluded = 0usize;
    for (player_id, seqs) in &filtered {
        let mut after_make = Vec::new();
        let mut after_miss = Vec::new();
        for seq in seqs {
            for (i, event) in seq.events.iter().enumerate() {
                let value = match metric {
                    BehaviorMetric::ShotDistance => event.shot_distance_ft,
                    BehaviorMetric::Dribbles => f64::from(event.dribbles),
                    BehaviorMetric::DefenderDistance => event.defender_distance_ft,
                    BehaviorMetric::TimeBetweenShots => {
                        if i == 0 {
                            continue;
                        }
                        seq.elapsed_game_time[i] - seq.elapsed_game_time[i - 1]
                    }
                };
                match event.prior_outcome {
                    PriorOutcome::Make => after_make.push(value),
                    PriorOutcome::Miss => after_miss.push(value),
                    PriorOutcome::Unknown => {}
                }
            }
        }
        let (mean_make, sd_make) = mean_sd(&after_make);
        let (mean_miss, sd_miss) = mean_sd(&after_miss);
        let test = two_sample_z(
            mean_make,
            sd_make,
            after_make.len(),
            mean_miss,
            sd_miss,
            after_miss.len(),
            Alternative::TwoSided,
        );
        let test = match test {
            Ok(t) => t,
            Err(StatError::InsufficientData { .. }) | Err(StatError::ZeroVariance) => {
                excluded += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(BehaviorRow {
            player_id: player_id.clone(),
            player_name: seqs[0].player_name.clone(),
            mean_after_make: mean_make,
            sd_after_make: sd_make,
            n_after_make: after_make.len(),
            mean_after_miss: mean_miss,
            sd_after_miss: sd_miss,
            n_after_miss: after_miss.len(),
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
    let league = league_summary(&p_values, excluded, alpha, intervals);

    let n_players = rows.len();
    let n_higher_after_make = rows
        .iter()
        .filter(|r| r.mean_after_make > r.mean_after_miss)
        .count();
    let sig_higher_after_make = rows
        .iter()
        .filter(|r| r.significant && r.mean_after_make > r.mean_after_miss)
        .count();
    let sig_higher_after_miss = league.n_significant - sig_higher_after_make;
    let ci = |k: usize| {
        if n_players == 0 {
            (0.0, 0.0)
        } else {
            match intervals {
                IntervalMethod::NormalApprox => {
                    proportion_ci(k, n_players, SUMMARY_LEVEL).expect("valid proportion")
                }
                IntervalMethod::ExactBinomial => {
                    proportion_ci_exact(k, n_players, SUMMARY_LEVEL).expect("valid proportion")
                }
            }
        }
    };
    let summary = BehaviorSummary {
        n_higher_after_make,
        n_higher_after_miss: n_players - n_higher_after_make,
        sig_higher_after_make,
        sig_higher_after_miss,
        ci_sig_higher_after_make: ci(sig_higher_after_make),
        ci_sig_higher_after_miss: ci(sig_higher_after_miss),
        league,
    };

    rows.sort_by(|a, b| {
        a.z.total_cmp(&b.z)
            .then_with(|| a.player_id.cmp(&b.player_id))
    });
    Ok((rows, summary))
}

/// Mean and sample standard deviation (n-1 denominator).
fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl Tabular for BehaviorRow {
    fn headers() -> &'static [&'static str] {
        &[
            "Player",
            "Mean After Make",
            "SD After Make",
            "N After Make",
            "Mean After Miss",
            "SD After Miss",
            "N After Miss",
            "Z",
            "P-value",
            "Significant",
            "BH-Rejected",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Str(self.player_name.clone()),
            Cell::Mean(self.mean_after_make),
            Cell::Mean(self.sd_after_make),
            Cell::Int(self.n_after_make as i64),
            Cell::Mean(self.mean_after_miss),
            Cell::Mean(self.sd_after_miss),
            Cell::Int(self.n_after_miss as i64),
            Cell::Stat(self.z),
            Cell::PValue(self.p_value),
            Cell::Flag(self.significant),
            Cell::Flag(self.bh_rejected),
        ]
    }
}

impl Summary for BehaviorSummary {
    fn entries(&self) -> Vec<(String, Cell)> {
        let mut entries = self.league.entries();
        entries.extend([
            entry(
                "higher_after_make",
                Cell::Int(self.n_higher_after_make as i64),
            ),
            entry(
                "higher_after_miss",
                Cell::Int(self.n_higher_after_miss as i64),
            ),
            entry(
                "significant_higher_after_make",
                Cell::Int(self.sig_higher_after_make as i64),
            ),
            entry(
                "significant_higher_after_miss",
                Cell::Int(self.sig_higher_after_miss as i64),
            ),
            entry(
                "ci_higher_after_make_low",
                Cell::Stat(self.ci_sig_higher_after_make.0),
            ),
            entry(
                "ci_higher_after_make_high",
                Cell::Stat(self.ci_sig_higher_after_make.1),
            ),
            entry(
                "ci_higher_after_miss_low",
                Cell::Stat(self.ci_sig_higher_after_miss.0),
            ),
            entry(
                "ci_higher_after_miss_high",
                Cell::Stat(self.ci_sig_higher_after_miss.1),
            ),
        ]);
        entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_sequences, parse_shot_log, recode_first_shots, SchemaMap};
    use approx::assert_abs_diff_eq;

    const HEADER: &str =
        "game_id,player_id,player_name,period,clock_remaining_s,made,shot_distance_ft,dribbles,defender_distance_ft";

    fn league(rows: &str) -> PlayerSequences {
        let text = format!("{HEADER}\n{rows}");
        let parsed = parse_shot_log(text.as_bytes(), &SchemaMap::identity(), b',').unwrap();
        let mut map = build_sequences(parsed.events);
        recode_first_shots(&mut map);
        map
    }

    // One game: make at 700, then alternating outcomes with distances
    // chosen so post-make shots are short and post-miss shots are long.
    fn alternating_distance_rows(player: &str, game: &str, n: usize) -> String {
        let mut rows = String::new();
        for i in 0..n {
            let made = i % 2 == 0;
            // Shot i > 0 follows outcome of shot i-1.
            let prior_was_make = i > 0 && (i - 1) % 2 == 0;
            let distance = if prior_was_make {
                5.0 + (i % 3) as f64
            } else {
                20.0 + (i % 3) as f64
            };
            rows.push_str(&format!(
                "{game},{player},{player},1,{},{},{distance},{i},{distance}\n",
                700 - i as i64,
                u8::from(made),
            ));
        }
        rows
    }

    #[test]
    fn detects_distance_shift() {
        let map = league(&alternating_distance_rows("ann", "g1", 40));
        let (rows, summary) = behavior_analysis(
            &map,
            BehaviorMetric::ShotDistance,
            &BehaviorFilters::default(),
            0.05,
            IntervalMethod::NormalApprox,
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert!(row.mean_after_make < 10.0);
        assert!(row.mean_after_miss > 18.0);
        assert!(row.z < 0.0);
        assert!(row.significant);
        assert_eq!(summary.n_higher_after_miss, 1);
        assert_eq!(summary.league.n_significant, 1);
    }

    #[test]
    fn first_shot_of_each_game_is_excluded() {
        // Two games of 3 shots: 6 attempts, 2 first shots, so 4 grouped
        // observations.
        let mut rows = String::new();
        for (game, base) in [("g1", 10.0), ("g2", 11.5)] {
            rows.push_str(&format!(
                "{game},ann,Ann,1,700,1,{base},0,1\n{game},ann,Ann,1,600,0,{},0,1\n{game},ann,Ann,1,500,1,{},0,1\n",
                base + 2.0,
                base + 4.0,
            ));
        }
        let map = league(&rows);
        let (rows, _) = behavior_analysis(
            &map,
            BehaviorMetric::ShotDistance,
            &BehaviorFilters::default(),
            0.05,
            IntervalMethod::NormalApprox,
        )
        .unwrap();
        assert_eq!(rows[0].n_after_make + rows[0].n_after_miss, 4);
    }

    #[test]
    fn time_gaps_attributed_to_prior_outcome() {
        // Shots at clocks 700, 650, 500 in one period: gaps 50 and 150.
        // Outcomes: make, miss, make -> gap 50 after make, 150 after miss.
        let rows = "g1,ann,Ann,1,700,1,1,0,1\n\
                    g1,ann,Ann,1,650,0,1,0,1\n\
                    g1,ann,Ann,1,500,1,1,0,1\n\
                    g1,ann,Ann,2,700,0,1,0,1\n\
                    g1,ann,Ann,2,600,1,1,0,1\n\
                    g1,ann,Ann,2,450,1,1,0,1\n";
        let map = league(rows);
        let (rows, _) = behavior_analysis(
            &map,
            BehaviorMetric::TimeBetweenShots,
            &BehaviorFilters::default(),
            0.05,
            IntervalMethod::NormalApprox,
        )
        .unwrap();
        let row = &rows[0];
        // After makes: 50 (g1 p1), 740-600=140? No: elapsed gaps within the
        // game: shots at 20, 70, 220, 740, 840, 990 seconds. Gaps 50, 150,
        // 520, 100, 150 following outcomes make, miss, make, miss, make.
        assert_eq!(row.n_after_make, 3);
        assert_eq!(row.n_after_miss, 2);
        assert_abs_diff_eq!(
            row.mean_after_make,
            (50.0 + 520.0 + 150.0) / 3.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(row.mean_after_miss, (150.0 + 100.0) / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn identical_groups_are_not_significant() {
        // Distances repeat so both groups share mean and sd.
        let mut rows = String::new();
        for i in 0..30 {
            let distance = 5.0 + (i % 5) as f64;
            rows.push_str(&format!(
                "g1,ann,Ann,1,{},{},{distance},0,1\n",
                700 - i,
                i % 2
            ));
        }
        let map = league(&rows);
        let (rows, _) = behavior_analysis(
            &map,
            BehaviorMetric::ShotDistance,
            &BehaviorFilters::default(),
            0.05,
            IntervalMethod::NormalApprox,
        )
        .unwrap();
        assert!(!rows[0].significant);
    }

    #[test]
    fn min_outcome_filters_apply() {
        let map = league(&alternating_distance_rows("ann", "g1", 12));
        let filters = BehaviorFilters {
            min_hits: 15,
            min_misses: 15,
            min_attempts: 0,
        };
        let (rows, summary) = behavior_analysis(
            &map,
            BehaviorMetric::Dribbles,
            &filters,
            0.05,
            IntervalMethod::NormalApprox,
        )
        .unwrap();
        assert!(rows.is_empty());
        assert_eq!(summary.league.n_players, 0);
    }

    #[test]
    fn direction_counts_partition_players() {
        let mut text = alternating_distance_rows("ann", "g1", 24);
        text.push_str(&alternating_distance_rows("bob", "g1", 24));
        let map = league(&text);
        let (_, summary) = behavior_analysis(
            &map,
            BehaviorMetric::ShotDistance,
            &BehaviorFilters::default(),
            0.05,
            IntervalMethod::NormalApprox,
        )
        .unwrap();
        assert_eq!(
            summary.n_higher_after_make + summary.n_higher_after_miss,
            summary.league.n_players
        );
    }
}
