//! Moment-based algorithms: two-pass, textbook one-pass and shifted one-pass.

use std::fmt;
use std::str::FromStr;

use super::kahan::{sum_slice, sum_sq_dev_slice, RunningSum, Summation};
use super::{check_batch, check_value, VarianceResult};
use crate::error::{Error, Result};

/// Two-pass variance: mean first, then the sum of squared deviations.
pub fn two_pass(data: &[f64]) -> Result<VarianceResult> {
    two_pass_with(data, Summation::Naive)
}

pub fn two_pass_with(data: &[f64], summation: Summation) -> Result<VarianceResult> {
    check_batch(data)?;
    let n = data.len() as u64;
    let mean = sum_slice(data, summation).value() / n as f64;
    let s = sum_sq_dev_slice(data, mean, summation).value();
    Ok(VarianceResult::from_sum_sq_dev(n, mean, s, false))
}

/// Textbook one-pass: `S = Σx² − (Σx)²/N`.
pub fn textbook_one_pass(data: &[f64], clamp_negative: bool) -> Result<VarianceResult> {
    check_batch(data)?;
    let mut state = MomentState::new(0.0, Summation::Naive);
    state.extend_unchecked(data);
    state.finish(clamp_negative)
}

/// Shifted one-pass: the textbook formula applied to `x − s`.
pub fn shifted_one_pass(data: &[f64], policy: ShiftPolicy) -> Result<VarianceResult> {
    check_batch(data)?;
    let shift = policy.resolve(data)?;
    let mut state = MomentState::new(shift, Summation::Naive);
    state.extend_unchecked(data);
    state.finish(false)
}

/// How shifted one-pass picks its shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftPolicy {
    FirstElement,
    /// Mean of the first `min(N, k)` values.
    PrefixMean(usize),
    Explicit(f64),
}

impl Default for ShiftPolicy {
    fn default() -> Self {
        ShiftPolicy::PrefixMean(1000)
    }
}

impl ShiftPolicy {
    pub fn resolve(&self, data: &[f64]) -> Result<f64> {
        match *self {
            ShiftPolicy::FirstElement => data.first().copied().ok_or(Error::EmptyInput),
            ShiftPolicy::PrefixMean(k) => {
                if k == 0 {
                    return Err(Error::domain("prefix length must be positive"));
                }
                let prefix = &data[..data.len().min(k)];
                if prefix.is_empty() {
                    return Err(Error::EmptyInput);
                }
                Ok(prefix.iter().sum::<f64>() / prefix.len() as f64)
            }
            ShiftPolicy::Explicit(s) => {
                check_value(s)?;
                Ok(s)
            }
        }
    }
}

impl fmt::Display for ShiftPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftPolicy::FirstElement => f.write_str("first"),
            ShiftPolicy::PrefixMean(k) => write!(f, "prefix:{k}"),
            ShiftPolicy::Explicit(s) => write!(f, "explicit:{s:?}"),
        }
    }
}

impl FromStr for ShiftPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("invalid shift policy '{s}'"));
        match s.split_once(':') {
            None if s == "first" => Ok(ShiftPolicy::FirstElement),
            None if s == "prefix" => Ok(ShiftPolicy::default()),
            Some(("prefix", k)) => k.parse().map(ShiftPolicy::PrefixMean).map_err(|_| bad()),
            Some(("explicit", v)) => v.parse().map(ShiftPolicy::Explicit).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// The two terms textbook one-pass subtracts: `S₁ = Σy²` and
/// `S₂ = (Σy)²/N`, with `y = x − shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialTerms {
    pub s1: f64,
    pub s2: f64,
}

impl PartialTerms {
    pub fn sum_sq_dev(&self) -> f64 {
        self.s1 - self.s2
    }
}

/// Count, sum and sum of squares of `x − shift`, with optional Kahan
/// carries. Backs textbook (`shift = 0`) and shifted one-pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    count: u64,
    sum: RunningSum,
    sum_sq: RunningSum,
    shift: f64,
    summation: Summation,
}

impl Default for MomentState {
    fn default() -> Self {
        MomentState::new(0.0, Summation::Naive)
    }
}

impl MomentState {
    pub fn new(shift: f64, summation: Summation) -> Self {
        MomentState {
            count: 0,
            sum: RunningSum::default(),
            sum_sq: RunningSum::default(),
            shift,
            summation,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn sum(&self) -> f64 {
        self.sum.value()
    }

    pub fn sum_sq(&self) -> f64 {
        self.sum_sq.value()
    }

    pub fn sum_comp(&self) -> f64 {
        self.sum.carry
    }

    pub fn sum_sq_comp(&self) -> f64 {
        self.sum_sq.carry
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        check_value(x)?;
        self.push_unchecked(x);
        Ok(())
    }

    #[inline]
    pub(crate) fn push_unchecked(&mut self, x: f64) {
        let y = x - self.shift;
        self.count += 1;
        self.sum.add(y, self.summation);
        self.sum_sq.add(y * y, self.summation);
    }

    pub(crate) fn extend_unchecked(&mut self, data: &[f64]) {
        if self.summation == Summation::Naive && self.shift == 0.0 {
            // Same operations as push_unchecked, without the per-value dispatch.
            let (mut sum, mut sum_sq) = (self.sum.sum, self.sum_sq.sum);
            for &x in data {
                sum += x;
                sum_sq += x * x;
            }
            self.sum.sum = sum;
            self.sum_sq.sum = sum_sq;
            self.count += data.len() as u64;
        } else {
            for &x in data {
                self.push_unchecked(x);
            }
        }
    }

    /// Folds `other` (data that came after `self`) into a new state.
    pub fn merge(&self, other: &MomentState) -> Result<MomentState> {
        if self.shift.to_bits() != other.shift.to_bits() || self.summation != other.summation {
            return Err(Error::domain(
                "cannot merge moment states with different shifts or summation modes",
            ));
        }
        let mut out = *self;
        out.count += other.count;
        out.sum.merge(&other.sum, self.summation);
        out.sum_sq.merge(&other.sum_sq, self.summation);
        Ok(out)
    }

    pub fn partial_terms(&self) -> PartialTerms {
        let n = self.count as f64;
        let t = self.sum.value();
        PartialTerms {
            s1: self.sum_sq.value(),
            s2: t * t / n,
        }
    }

    /// Sample variance, mean `shift + Σy/N`.
    pub fn finish(&self, clamp_negative: bool) -> Result<VarianceResult> {
        match self.count {
            0 => return Err(Error::EmptyInput),
            1 => return Err(Error::InsufficientData(1)),
            _ => {}
        }
        let s = self.partial_terms().sum_sq_dev();
        let mean = self.shift + self.sum.value() / self.count as f64;
        Ok(VarianceResult::from_sum_sq_dev(
            self.count,
            mean,
            s,
            clamp_negative,
        ))
    }
}
