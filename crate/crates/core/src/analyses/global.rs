//! League-wide pair-difference analysis.

use super::AnalysisError;
use crate::ingest::PlayerSequences;
use crate::stats::{
    disjoint_pairs, global_t, global_t_permutation, pair_stats, GlobalPairTest, PairStats,
    PermutationTest,
};
use crate::tabular::{entry, Cell, Summary, Tabular};

/// Per-player disjoint-pair counts and conditional proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRow {
    pub player_id: String,
    pub player_name: String,
    pub n_pairs: usize,
    pub n_hit_first: usize,
    pub n_miss_first: usize,
    pub p_hat_hit: Option<f64>,
    pub p_hat_miss: Option<f64>,
    pub difference: Option<f64>,
}

/// Aggregate pair-difference test with league means.
#[derive(Debug, Clone)]
pub struct GlobalHotHand {
    pub rows: Vec<PairRow>,
    pub test: GlobalPairTest,
    /// Mean conditional make proportion after a make, over players with both
    /// proportions defined.
    pub mean_p_hat_hit: f64,
    /// Mean conditional make proportion after a miss, same population.
    pub mean_p_hat_miss: f64,
    /// Shuffle-calibrated p-value, when requested.
    pub permutation: Option<PermutationTest>,
}

/// Form disjoint pairs within each game, pool them per player, and compute
/// the aggregate pair-difference statistic. `permutation_rounds > 0` adds a
/// within-player shuffle calibration of its p-value.
pub fn global_hot_hand(
    sequences: &PlayerSequences,
    permutation_rounds: usize,
    seed: u64,
) -> Result<GlobalHotHand, AnalysisError> {
    let mut stats: Vec<PairStats> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut pairs_by_player: Vec<Vec<(bool, bool)>> = Vec::new();
    for (player_id, seqs) in sequences {
        let per_game: Vec<Vec<(bool, bool)>> =
            seqs.iter().map(|s| disjoint_pairs(&s.outcomes)).collect();
        stats.push(pair_stats(player_id, &per_game));
        names.push(seqs[0].player_name.clone());
        pairs_by_player.push(per_game.into_iter().flatten().collect());
    }

    let test = global_t(&stats).map_err(|_| {
        AnalysisError::NoQualifyingData(
            "no player has both conditional pair proportions defined".into(),
        )
    })?;
    let defined: Vec<&PairStats> = stats.iter().filter(|s| s.difference().is_some()).collect();
    let mean = |f: fn(&PairStats) -> Option<f64>| {
        defined.iter().filter_map(|s| f(s)).sum::<f64>() / defined.len() as f64
    };
    let mean_p_hat_hit = mean(|s| s.p_hat_hit);
    let mean_p_hat_miss = mean(|s| s.p_hat_miss);

    let permutation = if permutation_rounds > 0 {
        Some(global_t_permutation(
            &pairs_by_player,
            permutation_rounds,
            seed,
        )?)
    } else {
        None
    };

    let rows = stats
        .into_iter()
        .zip(names)
        .map(|(s, player_name)| PairRow {
            difference: s.difference(),
            player_id: s.player_id,
            player_name,
            n_pairs: s.n_pairs,
            n_hit_first: s.n_hit_first,
            n_miss_first: s.n_miss_first,
            p_hat_hit: s.p_hat_hit,
            p_hat_miss: s.p_hat_miss,
        })
        .collect();

    Ok(GlobalHotHand {
        rows,
        test,
        mean_p_hat_hit,
        mean_p_hat_miss,
        permutation,
    })
}

impl Tabular for PairRow {
    fn headers() -> &'static [&'static str] {
        &[
            "Player",
            "Pairs",
            "Hit-First",
            "Miss-First",
            "P(Hit|Hit)",
            "P(Hit|Miss)",
            "Difference",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Str(self.player_name.clone()),
            Cell::Int(self.n_pairs as i64),
            Cell::Int(self.n_hit_first as i64),
            Cell::Int(self.n_miss_first as i64),
            Cell::stat_opt(self.p_hat_hit),
            Cell::stat_opt(self.p_hat_miss),
            Cell::stat_opt(self.difference),
        ]
    }
}

impl Summary for GlobalHotHand {
    fn entries(&self) -> Vec<(String, Cell)> {
        let mut entries = vec![
            entry("players_included", Cell::Int(self.test.n_included as i64)),
            entry("players_excluded", Cell::Int(self.test.n_excluded as i64)),
            entry("total_pairs", Cell::Int(self.test.total_pairs as i64)),
            entry("global_t", Cell::Stat(self.test.result.statistic)),
            entry(
                "p_value_normal_approx",
                Cell::PValue(self.test.result.p_value),
            ),
            entry("mean_p_hat_hit", Cell::Stat(self.mean_p_hat_hit)),
            entry("mean_p_hat_miss", Cell::Stat(self.mean_p_hat_miss)),
        ];
        if let Some(perm) = &self.permutation {
            entries.push(entry("p_value_permutation", Cell::PValue(perm.p_value)));
            entries.push(entry("permutation_rounds", Cell::Int(perm.rounds as i64)));
        }
        entries
    }
}
