//! Independent oracles shared by the property and acceptance suites. These
//! deliberately avoid the library's closed-form code paths: distributions are
//! produced by exhaustive enumeration and rejection sets by definitional
//! search.

/// Exhaustive null distribution of the run count for all arrangements of
/// `n1` ones and `n2` zeros: returns `(mean, variance, pmf)` where `pmf[r]`
/// is the count-weighted probability of exactly `r` runs.
pub fn enumerate_runs_null(n1: u32, n2: u32) -> (f64, f64, std::collections::BTreeMap<u32, f64>) {
    let n = n1 + n2;
    assert!(n <= 20, "enumeration oracle limited to short sequences");
    let mut counts: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
    let mut arrangements: u64 = 0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() != n1 {
            continue;
        }
        arrangements += 1;
        let mut runs = 1u32;
        for bit in 1..n {
            if (mask >> bit) & 1 != (mask >> (bit - 1)) & 1 {
                runs += 1;
            }
        }
        *counts.entry(runs).or_default() += 1;
    }
    let total = arrangements as f64;
    let mean: f64 = counts
        .iter()
        .map(|(&r, &c)| f64::from(r) * c as f64)
        .sum::<f64>()
        / total;
    let variance: f64 = counts
        .iter()
        .map(|(&r, &c)| (f64::from(r) - mean).powi(2) * c as f64)
        .sum::<f64>()
        / total;
    let pmf = counts
        .into_iter()
        .map(|(r, c)| (r, c as f64 / total))
        .collect();
    (mean, variance, pmf)
}

/// Tail probabilities of the enumerated run-count null at an observed count.
pub fn enumerated_tails(pmf: &std::collections::BTreeMap<u32, f64>, observed: u32) -> (f64, f64) {
    let lower: f64 = pmf
        .iter()
        .filter(|(&r, _)| r <= observed)
        .map(|(_, p)| p)
        .sum();
    let upper: f64 = pmf
        .iter()
        .filter(|(&r, _)| r >= observed)
        .map(|(_, p)| p)
        .sum();
    (lower, upper)
}

/// Definitional Benjamini-Hochberg: scan every candidate rank k, keep the
/// largest whose order statistic sits under k*alpha/m, and reject everything
/// at or below that order statistic.
pub fn bh_bruteforce(p_values: &[f64], alpha: f64) -> Vec<usize> {
    let m = p_values.len();
    let mut sorted: Vec<f64> = p_values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut best: Option<f64> = None;
    for k in 1..=m {
        if sorted[k - 1] <= k as f64 * alpha / m as f64 {
            best = Some(sorted[k - 1]);
        }
    }
    match best {
        None => Vec::new(),
        Some(threshold) => (0..m).filter(|&i| p_values[i] <= threshold).collect(),
    }
}
