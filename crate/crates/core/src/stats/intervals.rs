//! Proportion confidence intervals and the chance-significance band for a
//! family of tests.

use statrs::distribution::{Beta, Binomial, ContinuousCDF, DiscreteCDF};

use super::error::StatError;
use super::hypothesis::normal_quantile;

/// How interval endpoints are computed in league summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntervalMethod {
    /// Normal (Wald) approximation.
    #[default]
    NormalApprox,
    /// Exact binomial (Clopper-Pearson / binomial quantiles).
    ExactBinomial,
}

/// Wald interval for a binomial proportion: `p̂ ± z sqrt(p̂(1-p̂)/n)`,
/// clipped to `[0, 1]`.
pub fn proportion_ci(k: usize, n: usize, level: f64) -> Result<(f64, f64), StatError> {
    check_proportion_args(k, n, level)?;
    let p = k as f64 / n as f64;
    let z = normal_quantile(0.5 + level / 2.0);
    let half = z * (p * (1.0 - p) / n as f64).sqrt();
    Ok(((p - half).max(0.0), (p + half).min(1.0)))
}

/// Clopper-Pearson exact interval for a binomial proportion.
pub fn proportion_ci_exact(k: usize, n: usize, level: f64) -> Result<(f64, f64), StatError> {
    check_proportion_args(k, n, level)?;
    let alpha = 1.0 - level;
    let lo = if k == 0 {
        0.0
    } else {
        Beta::new(k as f64, (n - k + 1) as f64)
            .expect("valid beta")
            .inverse_cdf(alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        Beta::new((k + 1) as f64, (n - k) as f64)
            .expect("valid beta")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    Ok((lo, hi))
}

fn check_proportion_args(k: usize, n: usize, level: f64) -> Result<(), StatError> {
    if n == 0 {
        return Err(StatError::EmptyInput);
    }
    if k > n {
        return Err(StatError::InvalidInput(format!("k={k} exceeds n={n}")));
    }
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(StatError::InvalidInput(format!("bad level {level}")));
    }
    Ok(())
}

/// Count interval for how many of `n_tests` independent tests are expected to
/// reach significance `alpha` by chance alone:
/// `n alpha ± z sqrt(n alpha (1 - alpha))`, floored at zero.
pub fn null_significance_band(n_tests: usize, alpha: f64, level: f64) -> (f64, f64) {
    let n = n_tests as f64;
    let mean = n * alpha;
    let z = normal_quantile(0.5 + level / 2.0);
    let half = z * (n * alpha * (1.0 - alpha)).sqrt();
    ((mean - half).max(0.0), mean + half)
}

/// Exact binomial variant of [`null_significance_band`]: equal-tail quantiles
/// of Binomial(n_tests, alpha).
pub fn null_significance_band_exact(n_tests: usize, alpha: f64, level: f64) -> (f64, f64) {
    if n_tests == 0 || alpha <= 0.0 {
        return (0.0, 0.0);
    }
    if alpha >= 1.0 {
        return (n_tests as f64, n_tests as f64);
    }
    let dist = Binomial::new(alpha, n_tests as u64).expect("valid binomial");
    let tail = (1.0 - level) / 2.0;
    let lo = dist.inverse_cdf(tail);
    let hi = dist.inverse_cdf(1.0 - tail);
    (lo as f64, hi as f64)
}
