//! Per-player, per-game ordered sequences.

use std::collections::BTreeMap;

use super::shots::{period_length, period_start, PriorOutcome, ShotEvent};

/// One player's attempts within one game, in chronological order.
///
/// Sequences never span games: the streak at the end of one game is not
/// concatenated with the start of the next.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerGameSequence {
    pub player_id: String,
    pub player_name: String,
    pub game_id: String,
    /// `outcomes[i] == events[i].made`.
    pub outcomes: Vec<bool>,
    pub events: Vec<ShotEvent>,
    /// Cumulative seconds since game start per event; nondecreasing.
    pub elapsed_game_time: Vec<f64>,
}

/// All of a player's game sequences, keyed by normalized player id.
pub type PlayerSequences = BTreeMap<String, Vec<PlayerGameSequence>>;

/// Group events into one sequence per (player, game), ordered within game by
/// (period, clock descending, source row), with elapsed game time computed
/// from 720 s regulation periods and 300 s overtimes.
pub fn build_sequences(events: Vec<ShotEvent>) -> PlayerSequences {
    let mut by_player_game: BTreeMap<(String, String), Vec<ShotEvent>> = BTreeMap::new();
    for event in events {
        by_player_game
            .entry((event.player_id.clone(), event.game_id.clone()))
            .or_default()
            .push(event);
    }

    let mut out = PlayerSequences::new();
    for ((player_id, game_id), mut events) in by_player_game {
        events.sort_by(|a, b| {
            a.period
                .cmp(&b.period)
                .then(b.clock_remaining_s.total_cmp(&a.clock_remaining_s))
                .then(a.source_row.cmp(&b.source_row))
        });
        let outcomes = events.iter().map(|e| e.made).collect();
        let elapsed = events
            .iter()
            .map(|e| period_start(e.period) + (period_length(e.period) - e.clock_remaining_s))
            .collect();
        let player_name = events[0].player_name.clone();
        out.entry(player_id.clone())
            .or_default()
            .push(PlayerGameSequence {
                player_id,
                player_name,
                game_id,
                outcomes,
                events,
                elapsed_game_time: elapsed,
            });
    }
    // BTreeMap iteration already sorts by player; games arrive sorted by
    // game_id from the (player, game) key order.
    out
}

/// Mark the first attempt of every game `Unknown` and stamp each later
/// attempt with the previous attempt's outcome. Idempotent, and never carries
/// an outcome across games.
pub fn recode_first_shots(sequences: &mut PlayerSequences) {
    for seqs in sequences.values_mut() {
        for seq in seqs {
            let mut prior = PriorOutcome::Unknown;
            for event in &mut seq.events {
                event.prior_outcome = prior;
                prior = if event.made {
                    PriorOutcome::Make
                } else {
                    PriorOutcome::Miss
                };
            }
        }
    }
}

fn season_totals(seqs: &[PlayerGameSequence]) -> (usize, usize) {
    let hits: usize = seqs
        .iter()
        .map(|s| s.outcomes.iter().filter(|&&o| o).count())
        .sum();
    let total: usize = seqs.iter().map(|s| s.outcomes.len()).sum();
    (hits, total - hits)
}

/// Keep players with at least `min_hits` makes and `min_misses` misses over
/// the season.
pub fn filter_min_outcomes(
    sequences: &PlayerSequences,
    min_hits: usize,
    min_misses: usize,
) -> PlayerSequences {
    sequences
        .iter()
        .filter(|(_, seqs)| {
            let (hits, misses) = season_totals(seqs);
            hits >= min_hits && misses >= min_misses
        })
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

/// Keep players with at least `min_attempts` attempts over the season.
pub fn filter_min_attempts(sequences: &PlayerSequences, min_attempts: usize) -> PlayerSequences {
    sequences
        .iter()
        .filter(|(_, seqs)| {
            let (hits, misses) = season_totals(seqs);
            hits + misses >= min_attempts
        })
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}
