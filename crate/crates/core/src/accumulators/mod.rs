//! Variance accumulators.
//!
//! Every representation is a small value-type state with a batch entry point
//! and, where the formula allows it, streaming `push` and `merge` entry
//! points. [`compute`] dispatches on [`AlgorithmId`] so the harness and the
//! CLI can treat the algorithms uniformly.
//!
//! The pairwise, Welford and total-variance states are generic over
//! [`Scalar`] so the same recurrences can be evaluated in exact rational
//! arithmetic and compared against the oracle.

use std::fmt;
use std::str::FromStr;

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};

mod kahan;
mod moments;
mod pairwise;
mod total;
mod welford;

pub use kahan::{compensated_add, RunningSum, Summation};
pub use moments::{
    shifted_one_pass, textbook_one_pass, two_pass, two_pass_with, MomentState, PartialTerms,
    ShiftPolicy,
};
pub use pairwise::{
    pair_merge, pair_state_from_value, pairwise_finalize, pairwise_stream_push, updating_yc_push,
    PairState, PairwiseStreamState, DEFAULT_LEAF_SIZE,
};
pub use total::{group_summarize, partition_groups, total_sum_sq, total_variance, GroupSummary};
pub use welford::{updating_wwh_push, WelfordState};

pub(crate) use kahan::{sum_slice, sum_sq_dev_slice};

/// Arithmetic the generic recurrences need. Implemented for `f64` and for
/// exact rationals.
pub trait Scalar: Num + Clone + FromPrimitive + PartialOrd {
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar")
    }
}

impl<T: Num + Clone + FromPrimitive + PartialOrd> Scalar for T {}

/// Rejects non-finite values.
pub(crate) fn check_finite(data: &[f64]) -> Result<()> {
    match data.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFiniteValue {
            index,
            value: data[index],
        }),
        None => Ok(()),
    }
}

pub(crate) fn check_value(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteValue { index: 0, value: x })
    }
}

/// Length and finiteness preconditions shared by the batch algorithms.
pub(crate) fn check_batch(data: &[f64]) -> Result<()> {
    match data.len() {
        0 => Err(Error::EmptyInput),
        1 => Err(Error::InsufficientData(1)),
        _ => check_finite(data),
    }
}

/// Final output of every algorithm.
///
/// `sample_variance` always uses the `N - 1` denominator. When a negative
/// raw sum of squares is clamped, `sum_sq_dev` keeps the raw value and
/// `sample_variance` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceResult {
    pub count: u64,
    pub mean: f64,
    pub sum_sq_dev: f64,
    pub sample_variance: f64,
    pub negative_clamped: bool,
}

impl VarianceResult {
    pub(crate) fn from_sum_sq_dev(count: u64, mean: f64, s: f64, clamp_negative: bool) -> Self {
        debug_assert!(count >= 2);
        if s < 0.0 && clamp_negative {
            return VarianceResult {
                count,
                mean,
                sum_sq_dev: s,
                sample_variance: 0.0,
                negative_clamped: true,
            };
        }
        VarianceResult {
            count,
            mean,
            sum_sq_dev: s,
            sample_variance: s / (count - 1) as f64,
            negative_clamped: false,
        }
    }

    pub fn stddev(&self) -> Option<f64> {
        (self.sample_variance >= 0.0).then(|| self.sample_variance.sqrt())
    }
}

/// Stable algorithm identifiers, used in flags and CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmId {
    TwoPass,
    Textbook,
    Shifted,
    Pairwise,
    UpdatingYc,
    UpdatingWwh,
    TotalVariance,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 7] = [
        AlgorithmId::TwoPass,
        AlgorithmId::Textbook,
        AlgorithmId::Shifted,
        AlgorithmId::Pairwise,
        AlgorithmId::UpdatingYc,
        AlgorithmId::UpdatingWwh,
        AlgorithmId::TotalVariance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::TwoPass => "two-pass",
            AlgorithmId::Textbook => "textbook",
            AlgorithmId::Shifted => "shifted",
            AlgorithmId::Pairwise => "pairwise",
            AlgorithmId::UpdatingYc => "updating-yc",
            AlgorithmId::UpdatingWwh => "updating-wwh",
            AlgorithmId::TotalVariance => "total-variance",
        }
    }

    /// Whether partial states over disjoint chunks can be combined.
    pub fn is_mergeable(self) -> bool {
        !matches!(self, AlgorithmId::UpdatingYc | AlgorithmId::UpdatingWwh)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s.trim().to_ascii_lowercase().as_str() {
            "two-pass" | "twopass" => AlgorithmId::TwoPass,
            "textbook" | "textbook-one-pass" => AlgorithmId::Textbook,
            "shifted" | "shifted-one-pass" => AlgorithmId::Shifted,
            "pairwise" | "pairwise-updating" => AlgorithmId::Pairwise,
            "updating-yc" | "yc" => AlgorithmId::UpdatingYc,
            "updating-wwh" | "updating" | "welford" => AlgorithmId::UpdatingWwh,
            "total-variance" | "total" => AlgorithmId::TotalVariance,
            other => return Err(Error::domain(format!("unknown algorithm '{other}'"))),
        };
        Ok(id)
    }
}

/// Knobs shared by the algorithms. Each algorithm reads only the fields it
/// needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceOptions {
    /// Clamp a negative raw S to zero (textbook and shifted one-pass only).
    pub clamp_negative: bool,
    pub summation: Summation,
    pub shift_policy: ShiftPolicy,
    /// Values per leaf of the pairwise merge tree.
    pub leaf_size: usize,
    /// Values per group for total variance.
    pub group_size: usize,
    /// Algorithm computing the per-group variance for total variance.
    pub inner: AlgorithmId,
}

impl Default for VarianceOptions {
    fn default() -> Self {
        VarianceOptions {
            clamp_negative: false,
            summation: Summation::Naive,
            shift_policy: ShiftPolicy::default(),
            leaf_size: DEFAULT_LEAF_SIZE,
            group_size: 10,
            inner: AlgorithmId::UpdatingWwh,
        }
    }
}

/// Runs `algorithm` over `data` sequentially.
pub fn compute(
    algorithm: AlgorithmId,
    data: &[f64],
    options: &VarianceOptions,
) -> Result<VarianceResult> {
    check_batch(data)?;
    match algorithm {
        AlgorithmId::TwoPass => two_pass_with(data, options.summation),
        AlgorithmId::Textbook => {
            let mut state = MomentState::new(0.0, options.summation);
            state.extend_unchecked(data);
            state.finish(options.clamp_negative)
        }
        AlgorithmId::Shifted => {
            let shift = options.shift_policy.resolve(data)?;
            let mut state = MomentState::new(shift, options.summation);
            state.extend_unchecked(data);
            state.finish(options.clamp_negative)
        }
        AlgorithmId::Pairwise => {
            let mut state = PairwiseStreamState::new(options.leaf_size)?;
            state.extend_unchecked(data);
            state.finalize()
        }
        AlgorithmId::UpdatingYc => {
            let mut state = PairState::empty();
            for &x in data {
                state.push_unchecked(x);
            }
            state.finish()
        }
        AlgorithmId::UpdatingWwh => {
            let mut state = WelfordState::empty();
            for &x in data {
                state.push_unchecked(x);
            }
            state.finish()
        }
        AlgorithmId::TotalVariance => {
            let groups = partition_groups(data, options.group_size, options.inner, options)?;
            total_variance(&groups)
        }
    }
}
