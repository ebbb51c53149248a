//! Benjamini-Hochberg step-up control of the false discovery rate.

/// Indices of hypotheses rejected by the Benjamini-Hochberg step-up rule at
/// level `alpha`.
///
/// Sort the p-values ascending, find the largest rank `k` (1-based) with
/// `p_(k) <= k * alpha / m`, and reject everything with a p-value at or below
/// `p_(k)` — so ties at the boundary are rejected together. Returns indices
/// into the input slice, ascending. p-values must lie in `[0, 1]`; NaN is
/// never rejected.
pub fn benjamini_hochberg(p_values: &[f64], alpha: f64) -> Vec<usize> {
    let m = p_values.len();
    if m == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        p_values[a]
            .partial_cmp(&p_values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let threshold = (1..=m).rev().find_map(|rank| {
        let p = p_values[order[rank - 1]];
        (p <= rank as f64 * alpha / m as f64).then_some(p)
    });
    match threshold {
        None => Vec::new(),
        Some(t) => (0..m).filter(|&i| p_values[i] <= t).collect(),
    }
}
