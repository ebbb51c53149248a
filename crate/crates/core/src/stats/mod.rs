//! Pure statistical kernels.
//!
//! Everything in this module is a function of its arguments: no globals, no
//! interior mutability, safe to call concurrently.

mod bh;
mod error;
mod hypothesis;
mod intervals;
mod pairs;
mod runs;

pub use bh::benjamini_hochberg;
pub use error::StatError;
pub use hypothesis::{
    corr_test, normal_upper_critical, pearson_r, two_sample_z, Alternative, TestMethod, TestResult,
};
pub use intervals::{
    null_significance_band, null_significance_band_exact, proportion_ci, proportion_ci_exact,
    IntervalMethod,
};
pub use pairs::{
    disjoint_pairs, global_t, global_t_permutation, pair_stats, GlobalPairTest, PairStats,
    PermutationTest,
};
pub use runs::{aggregate_runs_test, runs_count, runs_pmf, runs_test, RunsStats, EXACT_RUNS_LIMIT};
