//! Generic hypothesis-test plumbing plus the correlation and two-sample
//! z kernels.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use super::error::StatError;

/// Direction of the alternative hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternative {
    Greater,
    Less,
    TwoSided,
}

impl std::fmt::Display for Alternative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Alternative::Greater => write!(f, "greater"),
            Alternative::Less => write!(f, "less"),
            Alternative::TwoSided => write!(f, "two-sided"),
        }
    }
}

/// Which kernel produced a [`TestResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestMethod {
    /// Runs test, normal approximation to the null of R.
    RunsNormal,
    /// Runs test, exact combinatorial null of R.
    RunsExact,
    /// Runs test aggregated over independent games.
    RunsAggregate,
    /// Pair-difference statistic summed over players.
    GlobalPairDifference,
    /// Correlation t-test.
    CorrelationT,
    /// Two-sample z with unpooled variances.
    TwoSampleZ,
    /// Within-player shuffle calibration.
    PermutationShuffle,
}

impl std::fmt::Display for TestMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            TestMethod::RunsNormal => "runs-normal",
            TestMethod::RunsExact => "runs-exact",
            TestMethod::RunsAggregate => "runs-aggregate",
            TestMethod::GlobalPairDifference => "global-pair-difference",
            TestMethod::CorrelationT => "correlation-t",
            TestMethod::TwoSampleZ => "two-sample-z",
            TestMethod::PermutationShuffle => "permutation-shuffle",
        };
        write!(f, "{name}")
    }
}

/// Outcome of a hypothesis test.
///
/// `n` carries the sample sizes that went into the statistic; the meaning of
/// each entry depends on `method` (e.g. `[n1, n2]` for a two-sample z,
/// `[games, shots]` for an aggregated runs test).
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub alternative: Alternative,
    pub n: Vec<usize>,
    pub method: TestMethod,
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// p-value of a standard-normal statistic under the given alternative.
pub(crate) fn normal_p(z: f64, alternative: Alternative) -> f64 {
    let cdf = std_normal().cdf(z);
    one_or_two_sided(cdf, alternative)
}

/// p-value of a Student-t statistic with `df` degrees of freedom.
pub(crate) fn student_t_p(t: f64, df: f64, alternative: Alternative) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("valid t distribution");
    one_or_two_sided(dist.cdf(t), alternative)
}

fn one_or_two_sided(cdf: f64, alternative: Alternative) -> f64 {
    match alternative {
        Alternative::Less => cdf,
        Alternative::Greater => 1.0 - cdf,
        Alternative::TwoSided => (2.0 * cdf.min(1.0 - cdf)).min(1.0),
    }
}

/// Upper quantile of the standard normal, `Phi^-1(p)`.
pub(crate) fn normal_quantile(p: f64) -> f64 {
    std_normal().inverse_cdf(p)
}

/// One-sided critical value: the z exceeded with probability `alpha` under
/// the standard normal.
pub fn normal_upper_critical(alpha: f64) -> f64 {
    normal_quantile(1.0 - alpha)
}

/// Sample Pearson correlation of two equal-length series.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64, StatError> {
    if x.len() != y.len() {
        return Err(StatError::InvalidInput(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(StatError::InsufficientData {
            needed: 2,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Test `H0: rho = 0` from a sample correlation `r` over `n` observations,
/// via the transform `t = r * sqrt((n-2) / (1-r^2))` referred to a Student-t
/// with `n-2` degrees of freedom.
///
/// `|r| = 1` is handled as the limiting case: the statistic is signed
/// infinity and the p-value is 0 or 1 depending on the alternative.
pub fn corr_test(r: f64, n: usize, alternative: Alternative) -> Result<TestResult, StatError> {
    if n < 3 {
        return Err(StatError::InsufficientData { needed: 3, got: n });
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(StatError::InvalidInput(format!(
            "correlation out of range: {r}"
        )));
    }
    let df = (n - 2) as f64;
    let (t, p) = if r.abs() < 1.0 {
        let t = r * (df / (1.0 - r * r)).sqrt();
        (t, student_t_p(t, df, alternative))
    } else {
        let t = r.signum() * f64::INFINITY;
        let p = match alternative {
            Alternative::Greater => {
                if r > 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
            Alternative::Less => {
                if r < 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
            Alternative::TwoSided => 0.0,
        };
        (t, p)
    };
    Ok(TestResult {
        statistic: t,
        p_value: p,
        alternative,
        n: vec![n],
        method: TestMethod::CorrelationT,
    })
}

/// Two-sample z test with unpooled variances:
/// `z = (mean1 - mean2) / sqrt(sd1^2/n1 + sd2^2/n2)`.
pub fn two_sample_z(
    mean1: f64,
    sd1: f64,
    n1: usize,
    mean2: f64,
    sd2: f64,
    n2: usize,
    alternative: Alternative,
) -> Result<TestResult, StatError> {
    if n1 < 2 || n2 < 2 {
        return Err(StatError::InsufficientData {
            needed: 2,
            got: n1.min(n2),
        });
    }
    if sd1 < 0.0 || sd2 < 0.0 {
        return Err(StatError::InvalidInput(
            "negative standard deviation".into(),
        ));
    }
    if sd1 == 0.0 && sd2 == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    let se = (sd1 * sd1 / n1 as f64 + sd2 * sd2 / n2 as f64).sqrt();
    let z = (mean1 - mean2) / se;
    Ok(TestResult {
        statistic: z,
        p_value: normal_p(z, alternative),
        alternative,
        n: vec![n1, n2],
        method: TestMethod::TwoSampleZ,
    })
}
