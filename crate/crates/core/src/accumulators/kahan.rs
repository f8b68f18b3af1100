//! Compensated (Kahan) summation.

/// One compensated-summation step.
///
/// `carry` holds the low-order part lost by the previous addition; it is
/// subtracted from the next addend before it is folded into `sum`.
#[inline]
pub fn compensated_add(sum: f64, carry: f64, x: f64) -> (f64, f64) {
    let y = x - carry;
    let t = sum + y;
    (t, (t - sum) - y)
}

/// Left-to-right summation mode used by the moment-based algorithms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Summation {
    #[default]
    Naive,
    Compensated,
}

/// Running sum with an optional Kahan carry. The carry stays exactly zero in
/// naive mode.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningSum {
    pub sum: f64,
    pub carry: f64,
}

impl RunningSum {
    #[inline]
    pub fn add(&mut self, x: f64, mode: Summation) {
        match mode {
            Summation::Naive => self.sum += x,
            Summation::Compensated => {
                let (s, c) = compensated_add(self.sum, self.carry, x);
                self.sum = s;
                self.carry = c;
            }
        }
    }

    /// Folds a later partial sum into this one.
    pub fn merge(&mut self, other: &RunningSum, mode: Summation) {
        match mode {
            Summation::Naive => self.sum += other.sum,
            Summation::Compensated => {
                self.add(other.sum, mode);
                self.add(-other.carry, mode);
            }
        }
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

pub(crate) fn sum_slice(data: &[f64], mode: Summation) -> RunningSum {
    let mut acc = RunningSum::default();
    match mode {
        Summation::Naive => {
            for &x in data {
                acc.sum += x;
            }
        }
        Summation::Compensated => {
            for &x in data {
                acc.add(x, mode);
            }
        }
    }
    acc
}

pub(crate) fn sum_sq_dev_slice(data: &[f64], center: f64, mode: Summation) -> RunningSum {
    let mut acc = RunningSum::default();
    for &x in data {
        let d = x - center;
        acc.add(d * d, mode);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kahan(xs: &[f64]) -> f64 {
        sum_slice(xs, Summation::Compensated).value()
    }

    #[test]
    fn single_step() {
        assert_eq!(compensated_add(0.0, 0.0, 1.5), (1.5, 0.0));
    }

    #[test]
    fn recovers_units_below_granularity() {
        // ulp(1e16) == 2, so each naive `+ 1.0` ties back to 1e16.
        let xs = [1e16, 1.0, 1.0];
        assert_eq!(xs.iter().sum::<f64>(), 1e16);
        assert_eq!(kahan(&xs), 1e16 + 2.0);
    }

    #[test]
    fn tenths_sum_to_one() {
        let xs = [0.1; 10];
        assert_eq!(xs.iter().sum::<f64>(), 0.9999999999999999);
        assert_eq!(kahan(&xs), 1.0);
    }

    #[test]
    fn carry_stays_zero_for_small_integers() {
        let mut acc = RunningSum::default();
        for i in -50..50 {
            acc.add(f64::from(i * 3), Summation::Compensated);
            assert_eq!(acc.carry, 0.0);
        }
        assert_eq!(acc.value(), -150.0);
    }

    #[test]
    fn naive_mode_never_sets_carry() {
        let acc = sum_slice(&[1e16, 1.0, 1.0, 0.1], Summation::Naive);
        assert_eq!(acc.carry, 0.0);
    }
}
