//! Pairwise updating and the Youngs-Cramer single-value update.
//!
//! Both work on the same `(count, T, S)` state: `T` is the total of the
//! segment and `S` its sum of squared deviations from the segment mean.

use super::{check_value, Scalar, VarianceResult};
use crate::error::{Error, Result};

pub const DEFAULT_LEAF_SIZE: usize = 128;

/// `(count, total, S)` for a contiguous segment of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState<T = f64> {
    pub count: u64,
    pub total: T,
    pub s: T,
}

impl<T: Scalar> Default for PairState<T> {
    fn default() -> Self {
        PairState::empty()
    }
}

impl<T: Scalar> PairState<T> {
    pub fn empty() -> Self {
        PairState {
            count: 0,
            total: T::zero(),
            s: T::zero(),
        }
    }

    pub fn leaf(x: T) -> Self {
        PairState {
            count: 1,
            total: x,
            s: T::zero(),
        }
    }

    /// Combines `self` (the earlier segment, `m` values) with `other` (the
    /// later segment, `n` values):
    /// `S = S₁ + S₂ + m/(n(m+n)) · ((n/m)·T₁ − T₂)²`.
    pub fn merge(&self, other: &PairState<T>) -> PairState<T> {
        if self.count == 0 {
            return other.clone();
        }
        if other.count == 0 {
            return self.clone();
        }
        let m = T::from_count(self.count);
        let n = T::from_count(other.count);
        let d = n.clone() / m.clone() * self.total.clone() - other.total.clone();
        let weight = m.clone() / (n.clone() * (m + n));
        PairState {
            count: self.count + other.count,
            total: self.total.clone() + other.total.clone(),
            s: self.s.clone() + other.s.clone() + weight * (d.clone() * d),
        }
    }

    /// Youngs-Cramer: `T_j = T_{j−1} + x`,
    /// `S_j = S_{j−1} + (j·x − T_j)² / (j(j−1))`.
    pub fn push_unchecked(&mut self, x: T) {
        let j = self.count + 1;
        self.total = self.total.clone() + x.clone();
        if j >= 2 {
            let jf = T::from_count(j);
            let d = jf.clone() * x - self.total.clone();
            let denom = jf * T::from_count(j - 1);
            self.s = self.s.clone() + d.clone() * d / denom;
        }
        self.count = j;
    }

    pub fn mean(&self) -> Option<T> {
        (self.count > 0).then(|| self.total.clone() / T::from_count(self.count))
    }
}

impl PairState<f64> {
    pub fn from_value(x: f64) -> Result<Self> {
        check_value(x)?;
        Ok(PairState::leaf(x))
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        check_value(x)?;
        self.push_unchecked(x);
        Ok(())
    }

    pub fn finish(&self) -> Result<VarianceResult> {
        match self.count {
            0 => Err(Error::EmptyInput),
            1 => Err(Error::InsufficientData(1)),
            n => Ok(VarianceResult::from_sum_sq_dev(
                n,
                self.total / n as f64,
                self.s,
                false,
            )),
        }
    }
}

pub fn pair_state_from_value(x: f64) -> Result<PairState> {
    PairState::from_value(x)
}

pub fn pair_merge<T: Scalar>(a: &PairState<T>, b: &PairState<T>) -> PairState<T> {
    a.merge(b)
}

pub fn updating_yc_push(state: &PairState, x: f64) -> Result<PairState> {
    let mut next = state.clone();
    next.push(x)?;
    Ok(next)
}

/// Streaming pairwise updating with `O(log N)` storage.
///
/// Values accumulate into `tail` by the Youngs-Cramer update; each full
/// leaf of `leaf_size` values carries up a binary counter of completed
/// blocks, so slot `k` holds exactly `2^k · leaf_size` values when occupied.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseStreamState<T = f64> {
    leaf_size: usize,
    levels: Vec<Option<PairState<T>>>,
    tail: PairState<T>,
}

impl<T: Scalar> PairwiseStreamState<T> {
    pub fn new(leaf_size: usize) -> Result<Self> {
        if leaf_size == 0 {
            return Err(Error::domain("leaf size must be positive"));
        }
        Ok(PairwiseStreamState {
            leaf_size,
            levels: Vec::new(),
            tail: PairState::empty(),
        })
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    pub fn levels(&self) -> &[Option<PairState<T>>] {
        &self.levels
    }

    pub fn tail(&self) -> &PairState<T> {
        &self.tail
    }

    pub fn count(&self) -> u64 {
        self.tail.count
            + self
                .levels
                .iter()
                .flatten()
                .map(|st| st.count)
                .sum::<u64>()
    }

    pub fn push_unchecked(&mut self, x: T) {
        self.tail.push_unchecked(x);
        if self.tail.count as usize == self.leaf_size {
            let block = std::mem::take(&mut self.tail);
            self.carry(block);
        }
    }

    fn carry(&mut self, mut block: PairState<T>) {
        for slot in self.levels.iter_mut() {
            match slot.take() {
                // The occupant holds earlier data, so it is the left operand.
                Some(earlier) => block = earlier.merge(&block),
                None => {
                    *slot = Some(block);
                    return;
                }
            }
        }
        self.levels.push(Some(block));
    }

    /// Drains everything into one state, merging from the lowest level up.
    pub fn into_pair_state(self) -> PairState<T> {
        let mut acc = self.tail;
        for earlier in self.levels.into_iter().flatten() {
            acc = earlier.merge(&acc);
        }
        acc
    }
}

impl PairwiseStreamState<f64> {
    pub fn push(&mut self, x: f64) -> Result<()> {
        check_value(x)?;
        self.push_unchecked(x);
        Ok(())
    }

    pub(crate) fn extend_unchecked(&mut self, data: &[f64]) {
        for &x in data {
            self.push_unchecked(x);
        }
    }

    pub fn finalize(self) -> Result<VarianceResult> {
        self.into_pair_state().finish()
    }
}

pub fn pairwise_stream_push(state: &PairwiseStreamState, x: f64) -> Result<PairwiseStreamState> {
    let mut next = state.clone();
    next.push(x)?;
    Ok(next)
}

pub fn pairwise_finalize(state: PairwiseStreamState) -> Result<VarianceResult> {
    state.finalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(count: u64, total: f64, s: f64) -> PairState {
        PairState { count, total, s }
    }

    #[test]
    fn leaves() {
        assert_eq!(pair_state_from_value(3.5).unwrap(), ps(1, 3.5, 0.0));
        assert_eq!(pair_state_from_value(0.0).unwrap(), ps(1, 0.0, 0.0));
        assert_eq!(pair_state_from_value(-2.0).unwrap(), ps(1, -2.0, 0.0));
        assert!(pair_state_from_value(f64::NAN).is_err());
    }

    #[test]
    fn merge_examples() {
        assert_eq!(
            pair_merge(&ps(2, 3.0, 0.5), &ps(2, 7.0, 0.5)),
            ps(4, 10.0, 5.0)
        );
        assert_eq!(pair_merge(&ps(1, 2.0, 0.0), &ps(1, 4.0, 0.0)), ps(2, 6.0, 2.0));
        let x = ps(3, 6.0, 2.0);
        assert_eq!(pair_merge(&PairState::empty(), &x), x);
        assert_eq!(pair_merge(&x, &PairState::empty()), x);
    }

    #[test]
    fn yc_examples() {
        let a = updating_yc_push(&PairState::empty(), 2.0).unwrap();
        assert_eq!(a, ps(1, 2.0, 0.0));
        let b = updating_yc_push(&a, 4.0).unwrap();
        assert_eq!(b, ps(2, 6.0, 2.0));
        let mut c = PairState::empty();
        for x in [1.0, 2.0, 3.0] {
            c.push(x).unwrap();
        }
        assert_eq!(c.s, 2.0);
        assert_eq!(c.finish().unwrap().sample_variance, 1.0);
    }

    #[test]
    fn yc_matches_single_value_merge() {
        let mut pushed = ps(3, 6.0, 2.0);
        pushed.push(10.0).unwrap();
        let merged = ps(3, 6.0, 2.0).merge(&ps(1, 10.0, 0.0));
        assert_eq!(pushed, merged);
    }

    #[test]
    fn stream_balanced_tree() {
        let mut st = PairwiseStreamState::new(1).unwrap();
        for x in [1.0, 2.0, 3.0, 4.0] {
            st = pairwise_stream_push(&st, x).unwrap();
        }
        assert_eq!(st.levels(), &[None, None, Some(ps(4, 10.0, 5.0))]);
        let r = pairwise_finalize(st).unwrap();
        assert_eq!(r.sum_sq_dev, 5.0);
        assert_eq!(r.sample_variance, 5.0 / 3.0);
    }

    #[test]
    fn stream_with_partial_tail() {
        let mut st = PairwiseStreamState::new(2).unwrap();
        for x in [1.0, 2.0, 3.0] {
            st.push(x).unwrap();
        }
        assert_eq!(st.levels(), &[Some(ps(2, 3.0, 0.5))]);
        assert_eq!(st.tail(), &ps(1, 3.0, 0.0));
        assert_eq!(st.finalize().unwrap().sum_sq_dev, 2.0);
    }

    #[test]
    fn stream_errors() {
        let mut st = PairwiseStreamState::new(4).unwrap();
        assert_eq!(st.clone().finalize(), Err(Error::EmptyInput));
        st.push(7.0).unwrap();
        assert_eq!(st.clone().finalize(), Err(Error::InsufficientData(1)));
        assert!(st.push(f64::INFINITY).is_err());
        assert!(PairwiseStreamState::<f64>::new(0).is_err());
    }

    #[test]
    fn finish_errors() {
        assert_eq!(PairState::empty().finish(), Err(Error::EmptyInput));
        assert_eq!(ps(1, 3.0, 0.0).finish(), Err(Error::InsufficientData(1)));
    }
}
