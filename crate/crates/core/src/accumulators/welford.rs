//! Welford / West / Hanson updating (`Updating-WWH`).

use super::{check_value, Scalar, VarianceResult};
use crate::error::{Error, Result};

/// `(j, M, S)`: count, running mean and running sum of squared deviations.
///
/// Not mergeable: it only ever absorbs one value at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct WelfordState<T = f64> {
    pub count: u64,
    pub mean: T,
    pub s: T,
}

impl<T: Scalar> Default for WelfordState<T> {
    fn default() -> Self {
        WelfordState::empty()
    }
}

impl<T: Scalar> WelfordState<T> {
    pub fn empty() -> Self {
        WelfordState {
            count: 0,
            mean: T::zero(),
            s: T::zero(),
        }
    }

    /// `M_j = M_{j−1} + d/j`, `S_j = S_{j−1} + (j−1)·d·(d/j)` with
    /// `d = x − M_{j−1}`. The first value needs no special case.
    #[inline]
    pub fn push_unchecked(&mut self, x: T) {
        self.count += 1;
        let j = T::from_count(self.count);
        let d = x - self.mean.clone();
        let step = d.clone() / j.clone();
        self.mean = self.mean.clone() + step.clone();
        self.s = self.s.clone() + (j - T::one()) * d * step;
    }
}

impl WelfordState<f64> {
    pub fn push(&mut self, x: f64) -> Result<()> {
        check_value(x)?;
        self.push_unchecked(x);
        Ok(())
    }

    pub fn finish(&self) -> Result<VarianceResult> {
        match self.count {
            0 => Err(Error::EmptyInput),
            1 => Err(Error::InsufficientData(1)),
            n => Ok(VarianceResult::from_sum_sq_dev(n, self.mean, self.s, false)),
        }
    }
}

pub fn updating_wwh_push(state: &WelfordState, x: f64) -> Result<WelfordState> {
    let mut next = state.clone();
    next.push(x)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(count: u64, mean: f64, s: f64) -> WelfordState {
        WelfordState { count, mean, s }
    }

    #[test]
    fn recurrence_examples() {
        let a = updating_wwh_push(&WelfordState::empty(), 2.0).unwrap();
        assert_eq!(a, ws(1, 2.0, 0.0));
        let b = updating_wwh_push(&a, 4.0).unwrap();
        assert_eq!(b, ws(2, 3.0, 2.0));
        let mut c = WelfordState::empty();
        for x in [1.0, 2.0, 3.0] {
            c.push(x).unwrap();
        }
        assert_eq!(c, ws(3, 2.0, 2.0));
        assert_eq!(c.finish().unwrap().sample_variance, 1.0);
    }

    #[test]
    fn errors() {
        let mut st = WelfordState::empty();
        assert_eq!(st.finish(), Err(Error::EmptyInput));
        st.push(1.0).unwrap();
        assert_eq!(st.finish(), Err(Error::InsufficientData(1)));
        assert!(st.push(f64::NEG_INFINITY).is_err());
        assert_eq!(st.count, 1);
    }
}
