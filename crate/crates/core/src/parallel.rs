//! Chunked multi-threaded evaluation of the mergeable algorithms.
//!
//! Each worker reduces one contiguous chunk to a partial state; partials are
//! combined on the calling thread strictly in chunk order, so the result
//! depends only on the plan and never on scheduling.

use std::ops::Range;
use std::thread;

use crate::accumulators::{
    check_batch, partition_groups, sum_slice, sum_sq_dev_slice, total_variance, AlgorithmId,
    MomentState, PairState, PairwiseStreamState, RunningSum, VarianceOptions, VarianceResult,
};
use crate::error::{Error, Result};

/// Contiguous, disjoint, ascending ranges covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkPlan {
    pub chunks: Vec<Range<usize>>,
    pub workers: usize,
}

impl ChunkPlan {
    pub fn len(&self) -> usize {
        self.chunks.last().map_or(0, |r| r.end)
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }
}

/// Splits `0..n` into chunks of `⌈n / workers⌉` (the last may be short).
pub fn plan_chunks(n: usize, workers: usize) -> ChunkPlan {
    let workers = workers.max(1);
    let chunks = if n == 0 {
        Vec::new()
    } else {
        let size = n.div_ceil(workers);
        (0..n).step_by(size).map(|s| s..(s + size).min(n)).collect()
    };
    ChunkPlan { chunks, workers }
}

/// Default worker count: `VARLAB_THREADS` if set, else the hardware
/// parallelism.
pub fn default_threads() -> usize {
    std::env::var("VARLAB_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Applies `f` to each chunk on its own thread and returns the results in
/// chunk order. A single chunk runs on the calling thread.
fn map_chunks<T, F>(data: &[f64], plan: &ChunkPlan, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[f64]) -> T + Sync,
{
    if plan.chunks.len() == 1 {
        return vec![f(&data[plan.chunks[0].clone()])];
    }
    thread::scope(|scope| {
        let handles: Vec<_> = plan
            .chunks
            .iter()
            .map(|r| {
                let chunk = &data[r.clone()];
                let f = &f;
                scope.spawn(move || f(chunk))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn fold_in_order<T>(partials: Vec<T>, mut combine: impl FnMut(T, T) -> Result<T>) -> Result<T> {
    let mut iter = partials.into_iter();
    let first = iter.next().ok_or(Error::EmptyInput)?;
    iter.try_fold(first, &mut combine)
}

/// Runs `algorithm` over `data` split by `plan`.
///
/// With a one-chunk plan the result is bit-identical to
/// [`crate::accumulators::compute`]. Total variance sub-groups each chunk by
/// `options.group_size`; a group size at least as large as the chunks makes
/// every chunk a single group.
pub fn parallel_variance(
    data: &[f64],
    algorithm: AlgorithmId,
    plan: &ChunkPlan,
    options: &VarianceOptions,
) -> Result<VarianceResult> {
    if !algorithm.is_mergeable() {
        return Err(Error::UnsupportedParallelAlgorithm(algorithm));
    }
    check_batch(data)?;
    if plan.len() != data.len() {
        return Err(Error::domain(format!(
            "plan covers {} values but data has {}",
            plan.len(),
            data.len()
        )));
    }
    let mode = options.summation;
    let n = data.len() as u64;

    match algorithm {
        AlgorithmId::TwoPass => {
            let sums = map_chunks(data, plan, |c| sum_slice(c, mode));
            let sum = fold_in_order(sums, |mut a: RunningSum, b| {
                a.merge(&b, mode);
                Ok(a)
            })?;
            let mean = sum.value() / n as f64;
            let devs = map_chunks(data, plan, |c| sum_sq_dev_slice(c, mean, mode));
            let s = fold_in_order(devs, |mut a: RunningSum, b| {
                a.merge(&b, mode);
                Ok(a)
            })?;
            Ok(VarianceResult::from_sum_sq_dev(n, mean, s.value(), false))
        }
        AlgorithmId::Textbook | AlgorithmId::Shifted => {
            let shift = match algorithm {
                AlgorithmId::Shifted => options.shift_policy.resolve(data)?,
                _ => 0.0,
            };
            let partials = map_chunks(data, plan, |c| {
                let mut st = MomentState::new(shift, mode);
                st.extend_unchecked(c);
                st
            });
            fold_in_order(partials, |a, b| a.merge(&b))?.finish(options.clamp_negative)
        }
        AlgorithmId::Pairwise => {
            let partials = map_chunks(data, plan, |c| -> Result<PairState> {
                let mut st = PairwiseStreamState::new(options.leaf_size)?;
                st.extend_unchecked(c);
                Ok(st.into_pair_state())
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            fold_in_order(partials, |a, b| Ok(a.merge(&b)))?.finish()
        }
        AlgorithmId::TotalVariance => {
            let groups = map_chunks(data, plan, |c| {
                partition_groups(c, options.group_size, options.inner, options)
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?
            .concat();
            total_variance(&groups)
        }
        AlgorithmId::UpdatingYc | AlgorithmId::UpdatingWwh => unreachable!(),
    }
}
