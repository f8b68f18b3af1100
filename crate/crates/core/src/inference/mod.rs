//! Statistics derived from a variance: standard deviation and error,
//! coefficient of variation, confidence intervals and the one-sample
//! two-tailed t-test.
//!
//! A negative variance is always an error here. Clamping is an opt-in of
//! the accumulators and never happens silently in this module.

use crate::accumulators::VarianceResult;
use crate::error::{Error, Result};

mod student_t;

pub use student_t::{t_quantile, t_two_tailed_p};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
    pub stddev: f64,
    /// `stddev / √n`.
    pub stderr: f64,
}

impl SummaryStats {
    pub fn new(n: u64, mean: f64, variance: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InsufficientData(n as usize));
        }
        if variance < 0.0 {
            return Err(Error::NegativeVariance(variance));
        }
        if !mean.is_finite() || !variance.is_finite() {
            return Err(Error::domain("summary statistics must be finite"));
        }
        let stddev = variance.sqrt();
        Ok(SummaryStats {
            n,
            mean,
            variance,
            stddev,
            stderr: stddev / (n as f64).sqrt(),
        })
    }
}

/// Summary statistics of an accumulator result.
pub fn summarize(result: &VarianceResult) -> Result<SummaryStats> {
    SummaryStats::new(result.count, result.mean, result.sample_variance)
}

/// Variance of `a·X + b` given the variance of `X`.
pub fn linear_transform_variance(a: f64, _b: f64, variance: f64) -> Result<f64> {
    if variance < 0.0 {
        return Err(Error::NegativeVariance(variance));
    }
    Ok(a * a * variance)
}

pub fn coefficient_of_variation(stats: &SummaryStats) -> Result<f64> {
    if stats.mean == 0.0 {
        return Err(Error::ZeroMean);
    }
    Ok(stats.stddev / stats.mean)
}

/// Half-width of the two-sided `1 − alpha` confidence interval for the mean.
pub fn confidence_half_width(stats: &SummaryStats, alpha: f64) -> Result<f64> {
    Ok(t_quantile(alpha, stats.n - 1)? * stats.stderr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureMode {
    None,
    /// Zero standard error with the mean away from the hypothesis: the
    /// statistic is infinite and the test cannot be carried out.
    LoudZeroStddev,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub critical_value: f64,
    pub reject: bool,
    /// Hypothesized means the test would not reject.
    pub acceptance_interval: (f64, f64),
    pub failure_mode: FailureMode,
}

impl TTestResult {
    pub fn acceptance_width(&self) -> f64 {
        self.acceptance_interval.1 - self.acceptance_interval.0
    }
}

/// One-sample two-tailed t-test of `H0: μ = mu0`.
pub fn one_sample_ttest(stats: &SummaryStats, mu0: f64, alpha: f64) -> Result<TTestResult> {
    let critical_value = t_quantile(alpha, stats.n - 1)?;
    let half = critical_value * stats.stderr;
    let acceptance_interval = (stats.mean - half, stats.mean + half);
    let diff = stats.mean - mu0;
    if stats.stderr == 0.0 {
        let loud = diff != 0.0;
        return Ok(TTestResult {
            t_statistic: if loud { f64::INFINITY.copysign(diff) } else { 0.0 },
            critical_value,
            reject: false,
            acceptance_interval,
            failure_mode: if loud {
                FailureMode::LoudZeroStddev
            } else {
                FailureMode::None
            },
        });
    }
    let t_statistic = diff / stats.stderr;
    Ok(TTestResult {
        t_statistic,
        critical_value,
        reject: t_statistic.abs() > critical_value,
        acceptance_interval,
        failure_mode: FailureMode::None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(n: u64, mean: f64, variance: f64) -> SummaryStats {
        SummaryStats::new(n, mean, variance).unwrap()
    }

    #[test]
    fn summary_examples() {
        let s = stats(100, 0.0, 4.0);
        assert_eq!((s.stddev, s.stderr), (2.0, 0.2));
        let z = stats(100, 5.0, 0.0);
        assert_eq!((z.stddev, z.stderr), (0.0, 0.0));
        assert_eq!(
            SummaryStats::new(100, 0.0, -47.52),
            Err(Error::NegativeVariance(-47.52))
        );
        assert_eq!(SummaryStats::new(1, 0.0, 0.0), Err(Error::InsufficientData(1)));
    }

    #[test]
    fn summarize_accepts_clamped_results() {
        let r = VarianceResult::from_sum_sq_dev(3, 1e8, -4.0, true);
        assert_eq!(summarize(&r).unwrap().stddev, 0.0);
        let raw = VarianceResult::from_sum_sq_dev(3, 1e8, -4.0, false);
        assert_eq!(summarize(&raw), Err(Error::NegativeVariance(-2.0)));
    }

    #[test]
    fn linear_transform() {
        assert_eq!(linear_transform_variance(2.0, 5.0, 3.0), Ok(12.0));
        assert_eq!(linear_transform_variance(1.0, 0.0, 3.5), Ok(3.5));
        assert_eq!(linear_transform_variance(0.0, 9.0, 3.5), Ok(0.0));
        assert!(linear_transform_variance(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn cv() {
        assert_eq!(coefficient_of_variation(&stats(10, 10.0, 4.0)), Ok(0.2));
        assert_eq!(coefficient_of_variation(&stats(10, 10.0, 0.0)), Ok(0.0));
        assert_eq!(coefficient_of_variation(&stats(10, 0.0, 1.0)), Err(Error::ZeroMean));
    }

    #[test]
    fn half_widths() {
        assert_eq!(confidence_half_width(&stats(10, 1.0, 0.0), 0.05), Ok(0.0));
        let s = stats(100, 0.5, 0.29 * 0.29);
        let h = confidence_half_width(&s, 0.05).unwrap();
        assert!((h - 1.9842169515086827 * 0.029).abs() < 1e-9, "{h}");
        assert_eq!(confidence_half_width(&s, 1.0), Ok(0.0));
    }

    #[test]
    fn ttest_at_the_mean_does_not_reject() {
        let s = stats(30, 4.0, 2.0);
        let r = one_sample_ttest(&s, 4.0, 0.05).unwrap();
        assert_eq!(r.t_statistic, 0.0);
        assert!(!r.reject);
        assert_eq!(r.failure_mode, FailureMode::None);
        let expected = 2.0 * r.critical_value * s.stderr;
        assert!((r.acceptance_width() - expected).abs() <= 4.0 * f64::EPSILON * s.mean);
    }

    #[test]
    fn ttest_rejects_far_hypothesis() {
        let s = stats(100, 10.0, 1.0);
        let r = one_sample_ttest(&s, 11.0, 0.05).unwrap();
        assert_eq!(r.t_statistic, -10.0);
        assert!(r.reject);
        assert!(r.acceptance_interval.1 < 11.0);
    }

    #[test]
    fn zero_stddev_is_a_loud_failure() {
        let s = stats(100, 1e12, 0.0);
        let r = one_sample_ttest(&s, 1e12 + 0.5, 0.05).unwrap();
        assert_eq!(r.failure_mode, FailureMode::LoudZeroStddev);
        assert_eq!(r.t_statistic, f64::NEG_INFINITY);
        assert_eq!(r.acceptance_width(), 0.0);
        let same = one_sample_ttest(&s, 1e12, 0.05).unwrap();
        assert_eq!(same.failure_mode, FailureMode::None);
    }

    #[test]
    fn inflated_stderr_widens_acceptance_interval() {
        // Standard errors 2634.65 and 0.0278 at n = 100.
        let wrong = SummaryStats { stderr: 2634.65, ..stats(100, 1e12, 1.0) };
        let right = SummaryStats { stderr: 0.0278, ..stats(100, 1e12, 1.0) };
        let w = one_sample_ttest(&wrong, 1e12, 0.05).unwrap();
        let r = one_sample_ttest(&right, 1e12, 0.05).unwrap();
        assert!((w.acceptance_width() / 2.0 - 5227.7).abs() < 1.0);
        assert!((r.acceptance_width() / 2.0 - 0.0552).abs() < 1e-3);
        assert!(w.acceptance_width() / r.acceptance_width() > 1e3);
    }
}
