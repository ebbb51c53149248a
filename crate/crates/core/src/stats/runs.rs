//! Runs-test kernel: run counting, the closed-form null moments of the run
//! count R, the exact combinatorial null for short sequences, and aggregation
//! across independent games.

use super::error::StatError;
use super::hypothesis::{normal_p, Alternative, TestMethod, TestResult};

/// Sequences no longer than this use the exact null distribution of R
/// instead of the normal approximation. Short per-game sequences make the
/// approximation poor in the tails.
pub const EXACT_RUNS_LIMIT: u64 = 20;

/// Run count and its null moments for one binary sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunsStats {
    /// Count of one outcome kind (makes).
    pub n1: u64,
    /// Count of the other kind (misses).
    pub n2: u64,
    /// Observed number of runs R.
    pub runs: u64,
    /// `E[R]` under exchangeability: `2*n1*n2/(n1+n2) + 1`.
    pub expected_runs: f64,
    /// `Var[R]` under exchangeability.
    pub variance_runs: f64,
}

impl RunsStats {
    pub fn new(n1: u64, n2: u64, runs: u64) -> Self {
        let n = (n1 + n2) as f64;
        let prod = 2.0 * n1 as f64 * n2 as f64;
        let expected = if n1 + n2 == 0 { 0.0 } else { prod / n + 1.0 };
        let variance = if n1 + n2 < 2 {
            0.0
        } else {
            prod * (prod - n) / (n * n * (n - 1.0))
        };
        RunsStats {
            n1,
            n2,
            runs,
            expected_runs: expected,
            variance_runs: variance,
        }
    }

    /// Count runs and both outcome totals from a sequence.
    pub fn from_outcomes(outcomes: &[bool]) -> Self {
        let n1 = outcomes.iter().filter(|&&o| o).count() as u64;
        let n2 = outcomes.len() as u64 - n1;
        RunsStats::new(n1, n2, runs_count(outcomes) as u64)
    }
}

/// Number of maximal constant blocks in a binary sequence; 0 for empty input.
pub fn runs_count(outcomes: &[bool]) -> usize {
    if outcomes.is_empty() {
        return 0;
    }
    1 + outcomes.windows(2).filter(|w| w[0] != w[1]).count()
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Exact null pmf of the run count for `n1` of one symbol and `n2` of the
/// other, as `(r, P(R = r))` pairs over the support.
///
/// For even `r = 2k`: `P = 2 C(n1-1,k-1) C(n2-1,k-1) / C(n1+n2,n1)`;
/// for odd `r = 2k+1`:
/// `P = [C(n1-1,k) C(n2-1,k-1) + C(n1-1,k-1) C(n2-1,k)] / C(n1+n2,n1)`.
pub fn runs_pmf(n1: u64, n2: u64) -> Vec<(u64, f64)> {
    let total = binomial(n1 + n2, n1);
    let max_runs = 2 * n1.min(n2) + u64::from(n1 != n2);
    let mut pmf = Vec::new();
    for r in 2..=max_runs {
        let p = if r % 2 == 0 {
            let k = r / 2;
            2.0 * binomial(n1 - 1, k - 1) * binomial(n2 - 1, k - 1) / total
        } else {
            let k = r / 2;
            (binomial(n1 - 1, k) * binomial(n2 - 1, k - 1)
                + binomial(n1 - 1, k - 1) * binomial(n2 - 1, k))
                / total
        };
        if p > 0.0 {
            pmf.push((r, p));
        }
    }
    pmf
}

fn exact_p(n1: u64, n2: u64, runs: u64, alternative: Alternative) -> f64 {
    let pmf = runs_pmf(n1, n2);
    let lower: f64 = pmf.iter().filter(|(r, _)| *r <= runs).map(|(_, p)| p).sum();
    let upper: f64 = pmf.iter().filter(|(r, _)| *r >= runs).map(|(_, p)| p).sum();
    match alternative {
        Alternative::Less => lower.min(1.0),
        Alternative::Greater => upper.min(1.0),
        Alternative::TwoSided => (2.0 * lower.min(upper)).min(1.0),
    }
}

/// Wald-Wolfowitz runs test for one sequence with `n1` makes, `n2` misses and
/// `runs` observed runs.
///
/// The statistic is `z = (R - E[R]) / sqrt(Var[R])`. Sequences of up to
/// [`EXACT_RUNS_LIMIT`] shots get an exact combinatorial p-value; longer ones
/// use the normal approximation. A `Less` alternative (fewer runs than
/// expected, i.e. streaky) is the hot-hand direction.
pub fn runs_test(
    n1: u64,
    n2: u64,
    runs: u64,
    alternative: Alternative,
) -> Result<TestResult, StatError> {
    if n1 == 0 || n2 == 0 {
        return Err(StatError::DegenerateSequence { n1, n2 });
    }
    let max_runs = 2 * n1.min(n2) + u64::from(n1 != n2);
    if runs < 2 || runs > max_runs {
        return Err(StatError::InvalidInput(format!(
            "run count {runs} impossible for (n1={n1}, n2={n2})"
        )));
    }
    let stats = RunsStats::new(n1, n2, runs);
    if stats.variance_runs <= 0.0 {
        return Err(StatError::DegenerateSequence { n1, n2 });
    }
    let z = (runs as f64 - stats.expected_runs) / stats.variance_runs.sqrt();
    let (p, method) = if n1 + n2 <= EXACT_RUNS_LIMIT {
        (exact_p(n1, n2, runs, alternative), TestMethod::RunsExact)
    } else {
        (normal_p(z, alternative), TestMethod::RunsNormal)
    };
    Ok(TestResult {
        statistic: z,
        p_value: p,
        alternative,
        n: vec![n1 as usize, n2 as usize],
        method,
    })
}

/// Runs test summed over independent games:
/// `z = (sum R - sum E[R]) / sqrt(sum Var[R])` over games with nonzero null
/// variance. `n` in the result is `[games used, total shots used]`.
pub fn aggregate_runs_test(
    per_game: &[RunsStats],
    alternative: Alternative,
) -> Result<TestResult, StatError> {
    let usable: Vec<&RunsStats> = per_game.iter().filter(|g| g.variance_runs > 0.0).collect();
    if usable.is_empty() {
        return Err(StatError::EmptyInput);
    }
    let sum_runs: f64 = usable.iter().map(|g| g.runs as f64).sum();
    let sum_expected: f64 = usable.iter().map(|g| g.expected_runs).sum();
    let sum_variance: f64 = usable.iter().map(|g| g.variance_runs).sum();
    let z = (sum_runs - sum_expected) / sum_variance.sqrt();
    let shots: u64 = usable.iter().map(|g| g.n1 + g.n2).sum();
    Ok(TestResult {
        statistic: z,
        p_value: normal_p(z, alternative),
        alternative,
        n: vec![usable.len(), shots as usize],
        method: TestMethod::RunsAggregate,
    })
}
