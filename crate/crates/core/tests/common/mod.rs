//! Exact-arithmetic helpers shared by the integration and acceptance tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varlab::oracle::{exact_from_f64, exact_mean, exact_variance};
use varlab::{GroupSummary, PairState};

pub type Q = BigRational;

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Values of mixed magnitude and sign: a random offset `±10^k` plus
    /// noise scaled by `10^j`.
    pub fn dataset(&mut self, n: usize) -> Vec<f64> {
        let k = self.range(0, 12) as i32;
        let j = self.range(0, 6) as i32 - 3;
        let sign = if self.range(0, 1) == 0 { 1.0 } else { -1.0 };
        let offset = sign * 10f64.powi(k);
        (0..n).map(|_| offset + (self.unit() - 0.5) * 10f64.powi(j)).collect()
    }

    /// Sorted interior cut points splitting `0..n` into non-empty parts.
    pub fn cuts(&mut self, n: usize) -> Vec<usize> {
        let parts = self.range(1, n.min(50));
        let mut cuts: Vec<usize> = (0..parts - 1).map(|_| self.range(1, n - 1)).collect();
        cuts.sort_unstable();
        cuts.dedup();
        cuts
    }
}

/// Splits `data` at the given cut points.
pub fn split_at_cuts<'a>(data: &'a [f64], cuts: &[usize]) -> Vec<&'a [f64]> {
    let mut out = Vec::new();
    let mut start = 0;
    for &c in cuts.iter().chain(std::iter::once(&data.len())) {
        out.push(&data[start..c]);
        start = c;
    }
    out
}

/// Exact `(n, mean, variance)` of a group, computed by the oracle.
pub fn exact_summary(group: &[f64]) -> GroupSummary<Q> {
    let variance = if group.len() >= 2 {
        exact_variance(group).unwrap()
    } else {
        Q::zero()
    };
    GroupSummary {
        n: group.len() as u64,
        mean: exact_mean(group).unwrap(),
        variance,
    }
}

/// Exact pairwise state of a segment built by Youngs-Cramer updates.
pub fn exact_yc(segment: &[f64]) -> PairState<Q> {
    let mut st = PairState::empty();
    for &x in segment {
        st.push_unchecked(exact_from_f64(x));
    }
    st
}

/// Merges `leaves` along a random binary tree, preserving order.
pub fn random_tree_merge(leaves: &[PairState<Q>], rng: &mut Rng) -> PairState<Q> {
    match leaves {
        [] => PairState::empty(),
        [one] => one.clone(),
        _ => {
            let split = rng.range(1, leaves.len() - 1);
            let left = random_tree_merge(&leaves[..split], rng);
            let right = random_tree_merge(&leaves[split..], rng);
            left.merge(&right)
        }
    }
}

/// Exact `Σ(x − x̄)²` by the direct two-pass definition, independent of
/// the oracle's integer scaling.
pub fn direct_sum_sq_dev(data: &[f64]) -> Q {
    let xs: Vec<Q> = data.iter().map(|&x| exact_from_f64(x)).collect();
    let n = Q::from_integer(BigInt::from(xs.len()));
    let mean = xs.iter().fold(Q::zero(), |a, x| a + x) / n;
    xs.iter().fold(Q::zero(), |a, x| {
        let d = x - &mean;
        a + &d * &d
    })
}
