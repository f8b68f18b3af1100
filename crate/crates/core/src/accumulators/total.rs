//! Total variance: combine per-group `(n, mean, variance)` summaries.
//!
//! `S = Σ nᵢ(mᵢ − x̄)² + Σ (nᵢ − 1)vᵢ` with `x̄ = Σ nᵢmᵢ / N`. This is the
//! within/between decomposition of the sum of squares, exact for any
//! partition of the data.

use super::{check_finite, compute, AlgorithmId, Scalar, VarianceOptions, VarianceResult};
use crate::error::{Error, Result};

/// Per-group count, mean and sample variance (`n − 1` denominator; zero
/// for a single-value group).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary<T = f64> {
    pub n: u64,
    pub mean: T,
    pub variance: T,
}

impl<T: Scalar> GroupSummary<T> {
    /// A negative variance can only come from a cancellation-prone inner
    /// algorithm; such a summary is still accepted by [`total_variance`].
    pub fn is_valid(&self) -> bool {
        self.n >= 1 && self.variance >= T::zero()
    }
}

/// Summarizes one group using `inner` for its variance.
pub fn group_summarize(data: &[f64], inner: AlgorithmId) -> Result<GroupSummary> {
    group_summarize_with(data, inner, &VarianceOptions::default())
}

pub(crate) fn group_summarize_with(
    data: &[f64],
    inner: AlgorithmId,
    options: &VarianceOptions,
) -> Result<GroupSummary> {
    if inner == AlgorithmId::TotalVariance {
        return Err(Error::domain("total-variance cannot be its own inner algorithm"));
    }
    match data {
        [] => Err(Error::EmptyInput),
        [x] => {
            check_finite(data)?;
            Ok(GroupSummary {
                n: 1,
                mean: *x,
                variance: 0.0,
            })
        }
        _ => {
            let r = compute(inner, data, options)?;
            Ok(GroupSummary {
                n: r.count,
                mean: r.mean,
                variance: r.sample_variance,
            })
        }
    }
}

/// Splits `data` into consecutive groups of `group_size` (the last one may
/// be shorter) and summarizes each with `inner`.
pub fn partition_groups(
    data: &[f64],
    group_size: usize,
    inner: AlgorithmId,
    options: &VarianceOptions,
) -> Result<Vec<GroupSummary>> {
    if group_size == 0 {
        return Err(Error::domain("group size must be positive"));
    }
    data.chunks(group_size)
        .map(|chunk| group_summarize_with(chunk, inner, options))
        .collect()
}

/// `(N, x̄, S)` computed from group summaries.
pub fn total_sum_sq<T: Scalar>(groups: &[GroupSummary<T>]) -> Result<(u64, T, T)> {
    if groups.is_empty() {
        return Err(Error::EmptyInput);
    }
    if groups.iter().any(|g| g.n == 0) {
        return Err(Error::domain("group with zero count"));
    }
    let total: u64 = groups.iter().map(|g| g.n).sum();
    if total < 2 {
        return Err(Error::InsufficientData(total as usize));
    }
    if let [g] = groups {
        // x̄ = m and the between-group term vanishes; return v untouched.
        let s = T::from_count(g.n - 1) * g.variance.clone();
        return Ok((g.n, g.mean.clone(), s));
    }

    let weighted = groups.iter().fold(T::zero(), |acc, g| {
        acc + T::from_count(g.n) * g.mean.clone()
    });
    let mean = weighted / T::from_count(total);

    let mut between = T::zero();
    let mut within = T::zero();
    for g in groups {
        let d = g.mean.clone() - mean.clone();
        between = between + T::from_count(g.n) * (d.clone() * d);
        within = within + T::from_count(g.n - 1) * g.variance.clone();
    }
    Ok((total, mean, between + within))
}

pub fn total_variance(groups: &[GroupSummary]) -> Result<VarianceResult> {
    let (n, mean, s) = total_sum_sq(groups)?;
    if let [g] = groups {
        return Ok(VarianceResult {
            count: n,
            mean,
            sum_sq_dev: s,
            sample_variance: g.variance,
            negative_clamped: false,
        });
    }
    Ok(VarianceResult::from_sum_sq_dev(n, mean, s, false))
}
