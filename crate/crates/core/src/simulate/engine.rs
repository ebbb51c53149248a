//! Sequence generation under the quarter-level streakiness mixture, plus the
//! detectors re-run on each synthetic league.

use super::profile::PlayerProfile;
use super::SimError;
use crate::rng::Stream;
use crate::stats::{
    aggregate_runs_test, benjamini_hochberg, disjoint_pairs, global_t, pair_stats, Alternative,
    PairStats, RunsStats,
};

/// A quarter make probability drawn from the mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarterProb {
    pub value: f64,
    /// True when the elevated branch exceeded 1 and was clamped down to it.
    pub clamped: bool,
}

/// Draw one quarter's make probability for a player with season rate `p`
/// under streakiness `delta`, given a uniform draw in `[0, 1)`.
///
/// The mixture takes `p/(1-delta)` with probability `(1-delta)/4`, `p` with
/// probability `1/2`, and `p/(1+delta)` with probability `(1+delta)/4` — in
/// that fixed order along the unit interval, lowest-probability branch
/// first, so seeds stay portable. Branch expectation equals `p` whenever the
/// elevated branch stays at most 1; above 1 it is clamped and flagged.
pub fn quarter_probability(p: f64, delta: f64, draw: f64) -> Result<QuarterProb, SimError> {
    if !(0.0..1.0).contains(&delta) {
        return Err(SimError::InvalidDelta(delta));
    }
    if p <= 0.0 || p >= 1.0 {
        return Err(SimError::InvalidProbability(p));
    }
    let elevated_weight = (1.0 - delta) / 4.0;
    let value = if draw < elevated_weight {
        p / (1.0 - delta)
    } else if draw < elevated_weight + 0.5 {
        p
    } else {
        p / (1.0 + delta)
    };
    Ok(QuarterProb {
        value: value.min(1.0),
        clamped: value > 1.0,
    })
}

/// One player's simulated games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimGame {
    pub game_id: String,
    pub outcomes: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimPlayer {
    pub player_id: String,
    pub games: Vec<SimGame>,
}

/// Detector outputs for one synthetic league.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorOutputs {
    /// Benjamini-Hochberg discoveries over the per-player runs tests.
    pub bh_discoveries: usize,
    /// Players with a usable aggregated runs test.
    pub runs_players: usize,
    /// Aggregate pair-difference statistic; NaN when no player had both
    /// conditional proportions defined.
    pub global_t: f64,
    pub global_t_p: f64,
    /// Players contributing to `global_t`.
    pub pairs_players: usize,
}

/// One synthetic league realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRun {
    pub delta: f64,
    pub replicate: u32,
    /// Master seed the run was keyed from.
    pub seed: u64,
    /// Simulated outcomes per player per game, in roster order.
    pub players: Vec<SimPlayer>,
    /// Quarters whose elevated branch was clamped to 1.
    pub clamp_count: u64,
    pub detectors: DetectorOutputs,
}

/// Simulate one league at `delta` and run the detectors at level `alpha`.
///
/// Draws are keyed by (seed, delta bits, replicate, player index, quarter
/// index, draw index): the same arguments and roster give bit-identical
/// output on any thread count, and each quarter burns exactly one
/// probability draw plus one draw per scheduled attempt.
pub fn simulate_run(
    roster: &[PlayerProfile],
    delta: f64,
    replicate: u32,
    master_seed: u64,
    alpha: f64,
) -> Result<SimulationRun, SimError> {
    if roster.is_empty() {
        return Err(SimError::EmptyRoster);
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(SimError::InvalidDelta(delta));
    }
    let run_stream = Stream::new(master_seed)
        .fork(delta.to_bits())
        .fork(u64::from(replicate));

    let mut players = Vec::with_capacity(roster.len());
    let mut clamp_count = 0u64;
    for (player_idx, profile) in roster.iter().enumerate() {
        let player_stream = run_stream.fork(player_idx as u64);
        let mut games: Vec<SimGame> = Vec::new();
        for (quarter_idx, slot) in profile.schedule.iter().enumerate() {
            let quarter_stream = player_stream.fork(quarter_idx as u64);
            let prob =
                quarter_probability(profile.season_fg_pct, delta, quarter_stream.uniform_at(0))?;
            clamp_count += u64::from(prob.clamped);
            let outcomes = (0..slot.attempts)
                .map(|shot| quarter_stream.bernoulli_at(1 + u64::from(shot), prob.value));
            match games.last_mut() {
                Some(game) if game.game_id == slot.game_id => game.outcomes.extend(outcomes),
                _ => games.push(SimGame {
                    game_id: slot.game_id.clone(),
                    outcomes: outcomes.collect(),
                }),
            }
        }
        players.push(SimPlayer {
            player_id: profile.player_id.clone(),
            games,
        });
    }

    let detectors = run_detectors(&players, alpha);
    Ok(SimulationRun {
        delta,
        replicate,
        seed: master_seed,
        players,
        clamp_count,
        detectors,
    })
}

/// Re-run the real-data detectors on a synthetic league: per-player runs
/// tests (streaky direction) fed to Benjamini-Hochberg, and the aggregate
/// pair-difference statistic over within-game disjoint pairs.
pub(crate) fn run_detectors(players: &[SimPlayer], alpha: f64) -> DetectorOutputs {
    let mut p_values = Vec::with_capacity(players.len());
    let mut stats: Vec<PairStats> = Vec::with_capacity(players.len());
    for player in players {
        let per_game: Vec<RunsStats> = player
            .games
            .iter()
            .map(|g| RunsStats::from_outcomes(&g.outcomes))
            .collect();
        if let Ok(test) = aggregate_runs_test(&per_game, Alternative::Less) {
            p_values.push(test.p_value);
        }
        let pairs: Vec<Vec<(bool, bool)>> = player
            .games
            .iter()
            .map(|g| disjoint_pairs(&g.outcomes))
            .collect();
        stats.push(pair_stats(&player.player_id, &pairs));
    }
    let (global_t_stat, global_t_p, pairs_players) = match global_t(&stats) {
        Ok(test) => (test.result.statistic, test.result.p_value, test.n_included),
        Err(_) => (f64::NAN, f64::NAN, 0),
    };
    DetectorOutputs {
        bh_discoveries: benjamini_hochberg(&p_values, alpha).len(),
        runs_players: p_values.len(),
        global_t: global_t_stat,
        global_t_p,
        pairs_players,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn profile(
        id: &str,
        p: f64,
        games: u32,
        quarters_per_game: u8,
        attempts: u32,
    ) -> PlayerProfile {
        let mut schedule = Vec::new();
        for g in 0..games {
            for q in 1..=quarters_per_game {
                schedule.push(super::super::ScheduleSlot {
                    game_id: format!("g{g:03}"),
                    period: q,
                    attempts,
                });
            }
        }
        PlayerProfile {
            player_id: id.to_string(),
            season_fg_pct: p,
            schedule,
        }
    }

    #[test]
    fn zero_delta_collapses_every_branch() {
        for draw in [0.0, 0.2, 0.5, 0.9, 0.999] {
            let q = quarter_probability(0.45, 0.0, draw).unwrap();
            assert_abs_diff_eq!(q.value, 0.45, epsilon = 1e-15);
            assert!(!q.clamped);
        }
    }

    #[test]
    fn branch_values_and_clamping() {
        // p = 0.8, delta = 0.5: branches 1.6 (clamped), 0.8, 0.5333 with
        // weights 0.125, 0.5, 0.375.
        let elevated = quarter_probability(0.8, 0.5, 0.1).unwrap();
        assert_abs_diff_eq!(elevated.value, 1.0, epsilon = 1e-15);
        assert!(elevated.clamped);
        let center = quarter_probability(0.8, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(center.value, 0.8, epsilon = 1e-15);
        assert!(!center.clamped);
        let depressed = quarter_probability(0.8, 0.5, 0.7).unwrap();
        assert_abs_diff_eq!(depressed.value, 0.8 / 1.5, epsilon = 1e-15);
        assert!(!depressed.clamped);
    }

    #[test]
    fn branch_expectation_is_p() {
        // (1-d)/4 / (1-d) + 1/2 + (1+d)/4 / (1+d) = 1 for any valid delta.
        let p = 0.45;
        let delta = 0.3;
        let weights = [(1.0 - delta) / 4.0, 0.5, (1.0 + delta) / 4.0];
        let values = [p / (1.0 - delta), p, p / (1.0 + delta)];
        let mean: f64 = weights.iter().zip(&values).map(|(w, v)| w * v).sum();
        assert_abs_diff_eq!(mean, p, epsilon = 1e-12);
    }

    #[test]
    fn invalid_arguments_error() {
        assert!(matches!(
            quarter_probability(0.5, 1.0, 0.5),
            Err(SimError::InvalidDelta(_))
        ));
        assert!(matches!(
            quarter_probability(0.5, -0.1, 0.5),
            Err(SimError::InvalidDelta(_))
        ));
        assert!(matches!(
            quarter_probability(1.0, 0.1, 0.5),
            Err(SimError::InvalidProbability(_))
        ));
    }

    #[test]
    fn schedule_is_respected_exactly() {
        let roster = vec![profile("ann", 0.45, 3, 4, 5)];
        let run = simulate_run(&roster, 0.3, 0, 42, 0.05).unwrap();
        assert_eq!(run.players.len(), 1);
        assert_eq!(run.players[0].games.len(), 3);
        for game in &run.players[0].games {
            assert_eq!(game.outcomes.len(), 20);
        }
    }

    #[test]
    fn identical_arguments_identical_sequences() {
        let roster = vec![profile("ann", 0.45, 5, 4, 3), profile("bob", 0.52, 5, 4, 3)];
        let a = simulate_run(&roster, 0.21, 3, 7, 0.05).unwrap();
        let b = simulate_run(&roster, 0.21, 3, 7, 0.05).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn replicates_differ() {
        let roster = vec![profile("ann", 0.45, 5, 4, 3)];
        let a = simulate_run(&roster, 0.21, 0, 7, 0.05).unwrap();
        let b = simulate_run(&roster, 0.21, 1, 7, 0.05).unwrap();
        assert_ne!(a.players, b.players);
    }

    #[test]
    fn zero_delta_make_rate_near_p() {
        let roster = vec![profile("ann", 0.45, 250, 4, 5)];
        let run = simulate_run(&roster, 0.0, 0, 11, 0.05).unwrap();
        let (makes, shots) = run.players[0]
            .games
            .iter()
            .flat_map(|g| &g.outcomes)
            .fold((0u64, 0u64), |(m, n), &o| (m + u64::from(o), n + 1));
        assert_eq!(shots, 5000);
        let rate = makes as f64 / shots as f64;
        // 3-sigma band around 0.45 for 5000 draws.
        assert!((rate - 0.45).abs() < 3.0 * (0.45f64 * 0.55 / 5000.0).sqrt());
        assert_eq!(run.clamp_count, 0);
    }

    #[test]
    fn quarters_of_same_game_form_one_sequence() {
        let roster = vec![profile("ann", 0.45, 2, 4, 2)];
        let run = simulate_run(&roster, 0.0, 0, 1, 0.05).unwrap();
        // 4 quarters x 2 attempts concatenate into one 8-shot game.
        assert_eq!(run.players[0].games[0].outcomes.len(), 8);
        assert_eq!(run.players[0].games[0].game_id, "g000");
    }
}
