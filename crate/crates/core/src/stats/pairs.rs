//! Disjoint-pair conditional estimators and the aggregate pair-difference
//! statistic.
//!
//! Consecutive shots are grouped into non-overlapping pairs within a game,
//! which sidesteps the small-sample selection bias of streak-conditional
//! estimates. Per player, `p_hat_hit` estimates the chance of making the
//! second shot of a pair given the first was made, `p_hat_miss` given it was
//! missed.

use super::error::StatError;
use super::hypothesis::{normal_p, Alternative, TestMethod, TestResult};
use crate::rng::Stream;

/// Per-player disjoint-pair counts and conditional make proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct PairStats {
    pub player_id: String,
    /// Total disjoint pairs n_i.
    pub n_pairs: usize,
    /// Pairs whose first shot was a make.
    pub n_hit_first: usize,
    /// Pairs whose first shot was a miss.
    pub n_miss_first: usize,
    /// P̂(make second | made first); `None` when no hit-first pairs exist.
    pub p_hat_hit: Option<f64>,
    /// P̂(make second | missed first); `None` when no miss-first pairs exist.
    pub p_hat_miss: Option<f64>,
}

impl PairStats {
    /// Difference `p_hat_hit - p_hat_miss` when both halves are defined.
    pub fn difference(&self) -> Option<f64> {
        Some(self.p_hat_hit? - self.p_hat_miss?)
    }
}

/// Split one within-game sequence into non-overlapping consecutive pairs,
/// dropping a trailing odd shot.
pub fn disjoint_pairs(outcomes: &[bool]) -> Vec<(bool, bool)> {
    outcomes.chunks_exact(2).map(|c| (c[0], c[1])).collect()
}

/// Pool a player's per-game pair lists into [`PairStats`].
pub fn pair_stats(player_id: &str, pairs_by_game: &[Vec<(bool, bool)>]) -> PairStats {
    let mut hit_first = 0usize;
    let mut miss_first = 0usize;
    let mut hit_hit = 0usize;
    let mut miss_hit = 0usize;
    for (first, second) in pairs_by_game.iter().flatten() {
        if *first {
            hit_first += 1;
            hit_hit += usize::from(*second);
        } else {
            miss_first += 1;
            miss_hit += usize::from(*second);
        }
    }
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    PairStats {
        player_id: player_id.to_string(),
        n_pairs: hit_first + miss_first,
        n_hit_first: hit_first,
        n_miss_first: miss_first,
        p_hat_hit: ratio(hit_hit, hit_first),
        p_hat_miss: ratio(miss_hit, miss_first),
    }
}

/// Result of the aggregate pair-difference test.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalPairTest {
    pub result: TestResult,
    /// Players contributing to the statistic (both proportions defined).
    pub n_included: usize,
    /// Players dropped because one proportion was undefined.
    pub n_excluded: usize,
    /// Total disjoint pairs over included players.
    pub total_pairs: usize,
    /// The standard-normal reference for this statistic is approximate; its
    /// exact null law is non-standard. Pair with the permutation calibration
    /// for a defensible p-value.
    pub approximate_reference: bool,
}

/// Aggregate pair-difference statistic over players:
/// `T = sum_i n_i (p_hat_hit_i - p_hat_miss_i) / sqrt(sum_i n_i)`,
/// with a one-sided greater p-value from the standard normal.
///
/// Players with either proportion undefined are excluded and counted.
pub fn global_t(stats: &[PairStats]) -> Result<GlobalPairTest, StatError> {
    let included: Vec<&PairStats> = stats.iter().filter(|s| s.difference().is_some()).collect();
    if included.is_empty() {
        return Err(StatError::EmptyInput);
    }
    let total_pairs: usize = included.iter().map(|s| s.n_pairs).sum();
    let numerator: f64 = included
        .iter()
        .map(|s| s.n_pairs as f64 * s.difference().expect("filtered"))
        .sum();
    let t = numerator / (total_pairs as f64).sqrt();
    Ok(GlobalPairTest {
        result: TestResult {
            statistic: t,
            p_value: normal_p(t, Alternative::Greater),
            alternative: Alternative::Greater,
            n: vec![included.len(), total_pairs],
            method: TestMethod::GlobalPairDifference,
        },
        n_included: included.len(),
        n_excluded: stats.len() - included.len(),
        total_pairs,
        approximate_reference: true,
    })
}

/// Permutation calibration of the aggregate pair-difference statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationTest {
    pub observed: f64,
    /// One-sided greater p-value `(1 + #{T* >= T}) / (1 + rounds)`.
    pub p_value: f64,
    pub rounds: usize,
}

/// Calibrate the statistic from [`global_t`] by shuffling outcomes within
/// each player and re-forming pairs, holding every player's make count and
/// pair count fixed.
pub fn global_t_permutation(
    pairs_by_player: &[Vec<(bool, bool)>],
    rounds: usize,
    seed: u64,
) -> Result<PermutationTest, StatError> {
    if rounds == 0 {
        return Err(StatError::InvalidInput("zero permutation rounds".into()));
    }
    let observed_stats: Vec<PairStats> = pairs_by_player
        .iter()
        .enumerate()
        .map(|(i, pairs)| pair_stats(&i.to_string(), std::slice::from_ref(pairs)))
        .collect();
    let observed = global_t(&observed_stats)?.result.statistic;

    let root = Stream::new(seed);
    let mut exceed = 0usize;
    let mut flat: Vec<Vec<bool>> = pairs_by_player
        .iter()
        .map(|pairs| pairs.iter().flat_map(|&(a, b)| [a, b]).collect())
        .collect();
    for round in 0..rounds {
        let round_stream = root.fork(round as u64);
        let stats: Vec<PairStats> = flat
            .iter_mut()
            .enumerate()
            .map(|(i, outcomes)| {
                round_stream.fork(i as u64).shuffle(outcomes);
                pair_stats(&i.to_string(), &[disjoint_pairs(outcomes)])
            })
            .collect();
        if let Ok(test) = global_t(&stats) {
            if test.result.statistic >= observed {
                exceed += 1;
            }
        }
    }
    Ok(PermutationTest {
        observed,
        p_value: (1 + exceed) as f64 / (1 + rounds) as f64,
        rounds,
    })
}
