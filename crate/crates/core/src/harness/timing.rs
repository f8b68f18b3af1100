use std::time::Instant;

use super::dataset::{generate, DatasetSpec};
use super::records::TimingRecord;
use crate::accumulators::{compute, two_pass, AlgorithmId, VarianceOptions};
use crate::error::{Error, Result};
use crate::parallel::{parallel_variance, plan_chunks};

/// Wall-clock timings for every (size, algorithm, thread count). Data is
/// generated before the clock starts and each cell gets one untimed warmup
/// run. Algorithms that cannot merge partial states only run at one thread.
pub fn timing_sweep(
    sizes: &[usize],
    algorithms: &[AlgorithmId],
    threads: &[usize],
    repetitions: usize,
    seed: u64,
    options: &VarianceOptions,
) -> Result<Vec<TimingRecord>> {
    if repetitions == 0 {
        return Err(Error::domain("repetitions must be positive"));
    }
    if threads.contains(&0) {
        return Err(Error::domain("thread counts must be positive"));
    }
    let mut out = Vec::new();
    for &size in sizes {
        let data = generate(&DatasetSpec::new(size, None, seed));
        for &algorithm in algorithms {
            for &t in threads {
                if t > 1 && !algorithm.is_mergeable() {
                    continue;
                }
                let plan = plan_chunks(size, t);
                let run = || -> Result<f64> {
                    let r = if t == 1 {
                        compute(algorithm, &data, options)?
                    } else {
                        parallel_variance(&data, algorithm, &plan, options)?
                    };
                    Ok(r.sample_variance)
                };
                std::hint::black_box(run()?);
                let mut times = Vec::with_capacity(repetitions);
                for _ in 0..repetitions {
                    let start = Instant::now();
                    std::hint::black_box(run()?);
                    times.push(start.elapsed().as_secs_f64());
                }
                let mean = times.iter().sum::<f64>() / repetitions as f64;
                let stddev = if repetitions > 1 {
                    two_pass(&times)?.sample_variance.sqrt()
                } else {
                    0.0
                };
                out.push(TimingRecord {
                    algorithm,
                    size,
                    threads: t,
                    repetitions,
                    mean_wall_seconds: mean,
                    stddev_wall_seconds: stddev,
                });
            }
        }
    }
    Ok(out)
}
