use rayon::prelude::*;

use super::dataset::{generate, DatasetSpec};
use super::records::PrecisionRecord;
use crate::accumulators::{compute, AlgorithmId, VarianceOptions};
use crate::error::{Error, Result};
use crate::oracle::{correct_digits, exact_variance, to_decimal_string, ExactRational};

/// Settings shared by the precision sweeps. Seeds run from `seed` to
/// `seed + repetitions − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub algorithms: Vec<AlgorithmId>,
    pub seed: u64,
    pub repetitions: usize,
    pub options: VarianceOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            algorithms: AlgorithmId::ALL.to_vec(),
            seed: 42,
            repetitions: 10,
            options: VarianceOptions::default(),
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::domain("no algorithms selected"));
        }
        if self.repetitions == 0 {
            return Err(Error::domain("repetitions must be positive"));
        }
        Ok(())
    }

    fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.repetitions as u64).map(move |i| self.seed.wrapping_add(i))
    }
}

/// An algorithm plus the options it runs with.
struct Variant {
    algorithm: AlgorithmId,
    options: VarianceOptions,
}

impl Variant {
    fn group_size(&self) -> Option<usize> {
        (self.algorithm == AlgorithmId::TotalVariance).then_some(self.options.group_size)
    }
}

/// Scores one algorithm run against a precomputed oracle value.
pub fn score(
    algorithm: AlgorithmId,
    data: &[f64],
    spec: DatasetSpec,
    options: &VarianceOptions,
    truth: &ExactRational,
) -> Result<PrecisionRecord> {
    let computed = compute(algorithm, data, options)?.sample_variance;
    Ok(PrecisionRecord {
        algorithm,
        spec,
        group_size: (algorithm == AlgorithmId::TotalVariance).then_some(options.group_size),
        computed_variance: computed,
        oracle_variance: to_decimal_string(truth, 30),
        digits: correct_digits(computed, truth).digits,
    })
}

/// Records indexed `[dataset][variant]`. Datasets run concurrently; each
/// dataset's oracle is computed once.
fn evaluate(datasets: &[DatasetSpec], variants: &[Variant]) -> Result<Vec<Vec<PrecisionRecord>>> {
    datasets
        .par_iter()
        .map(|spec| {
            let data = generate(spec);
            let truth = exact_variance(&data)?;
            variants
                .iter()
                .map(|v| score(v.algorithm, &data, *spec, &v.options, &truth))
                .collect()
        })
        .collect()
}

/// Sweep over dataset parameter values `xs`; rows come out ordered by
/// value, then algorithm, then seed.
fn sweep_over<X: Copy + Sync>(
    xs: &[X],
    to_spec: impl Fn(X, u64) -> DatasetSpec,
    config: &SweepConfig,
) -> Result<Vec<PrecisionRecord>> {
    config.validate()?;
    let reps = config.repetitions;
    let datasets: Vec<DatasetSpec> = xs
        .iter()
        .flat_map(|&x| config.seeds().map(move |s| (x, s)))
        .map(|(x, s)| to_spec(x, s))
        .collect();
    for d in &datasets {
        if d.size < 2 {
            return Err(Error::InsufficientData(d.size));
        }
    }
    let variants: Vec<Variant> = config
        .algorithms
        .iter()
        .map(|&algorithm| Variant {
            algorithm,
            options: config.options,
        })
        .collect();
    let mut rows = evaluate(&datasets, &variants)?.into_iter();
    let mut out = Vec::with_capacity(datasets.len() * variants.len());
    for _ in xs {
        let block: Vec<_> = rows.by_ref().take(reps).collect();
        out.extend(by_variant(block));
    }
    Ok(out)
}

/// Reorders per-dataset rows (one record per variant) into variant-major
/// order, keeping dataset order within each variant.
fn by_variant(rows: Vec<Vec<PrecisionRecord>>) -> Vec<PrecisionRecord> {
    let width = rows.first().map_or(0, Vec::len);
    let mut columns: Vec<_> = rows.into_iter().map(Vec::into_iter).collect();
    let mut out = Vec::with_capacity(width * columns.len());
    for _ in 0..width {
        out.extend(columns.iter_mut().filter_map(Iterator::next));
    }
    out
}

/// Digits against the additive shift `10^e` at a fixed size. `None` in
/// `exponents` is the unshifted data.
pub fn shift_sweep(
    size: usize,
    exponents: &[Option<i32>],
    config: &SweepConfig,
) -> Result<Vec<PrecisionRecord>> {
    sweep_over(exponents, |e, seed| DatasetSpec::new(size, e, seed), config)
}

/// Digits against dataset size at a fixed shift.
pub fn size_sweep(
    sizes: &[usize],
    shift_exponent: Option<i32>,
    config: &SweepConfig,
) -> Result<Vec<PrecisionRecord>> {
    sweep_over(sizes, |n, seed| DatasetSpec::new(n, shift_exponent, seed), config)
}

/// Total-variance digits against group size. Every group size sees the
/// same datasets; `config.algorithms` is ignored.
pub fn group_size_sweep(
    size: usize,
    shift_exponent: Option<i32>,
    group_sizes: &[usize],
    config: &SweepConfig,
) -> Result<Vec<PrecisionRecord>> {
    if config.repetitions == 0 {
        return Err(Error::domain("repetitions must be positive"));
    }
    if size < 2 {
        return Err(Error::InsufficientData(size));
    }
    if let Some(&g) = group_sizes.iter().find(|&&g| g == 0 || g > size) {
        return Err(Error::domain(format!("group size {g} outside 1..={size}")));
    }
    let datasets: Vec<DatasetSpec> = config
        .seeds()
        .map(|s| DatasetSpec::new(size, shift_exponent, s))
        .collect();
    let variants: Vec<Variant> = group_sizes
        .iter()
        .map(|&g| Variant {
            algorithm: AlgorithmId::TotalVariance,
            options: VarianceOptions {
                group_size: g,
                ..config.options
            },
        })
        .collect();
    debug_assert!(variants.iter().all(|v| v.group_size().is_some()));
    Ok(by_variant(evaluate(&datasets, &variants)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(algorithms: &[AlgorithmId], reps: usize) -> SweepConfig {
        SweepConfig {
            algorithms: algorithms.to_vec(),
            repetitions: reps,
            ..Default::default()
        }
    }

    #[test]
    fn shift_sweep_row_order() {
        let cfg = config(&[AlgorithmId::TwoPass, AlgorithmId::Textbook], 2);
        let rows = shift_sweep(50, &[None, Some(3)], &cfg).unwrap();
        let keys: Vec<_> = rows
            .iter()
            .map(|r| (r.spec.shift_exponent, r.algorithm, r.spec.seed))
            .collect();
        use AlgorithmId::*;
        assert_eq!(
            keys,
            vec![
                (None, TwoPass, 42),
                (None, TwoPass, 43),
                (None, Textbook, 42),
                (None, Textbook, 43),
                (Some(3), TwoPass, 42),
                (Some(3), TwoPass, 43),
                (Some(3), Textbook, 42),
                (Some(3), Textbook, 43),
            ]
        );
    }

    #[test]
    fn unshifted_data_scores_high_everywhere() {
        let rows = shift_sweep(1000, &[None], &config(&AlgorithmId::ALL, 2)).unwrap();
        for r in rows {
            assert!(r.digits >= 10.0, "{r:?}");
        }
    }

    #[test]
    fn total_variance_rows_carry_group_size() {
        let rows = shift_sweep(
            20,
            &[Some(1)],
            &config(&[AlgorithmId::TotalVariance, AlgorithmId::Pairwise], 1),
        )
        .unwrap();
        assert_eq!(rows[0].group_size, Some(10));
        assert_eq!(rows[1].group_size, None);
    }

    #[test]
    fn group_sweep_shapes_and_validation() {
        let cfg = config(&[], 2);
        let rows = group_size_sweep(100, Some(2), &[1, 10, 100], &cfg).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(
            rows.iter().map(|r| r.group_size.unwrap()).collect::<Vec<_>>(),
            [1, 1, 10, 10, 100, 100]
        );
        assert!(group_size_sweep(100, None, &[101], &cfg).is_err());
        assert!(group_size_sweep(100, None, &[0], &cfg).is_err());
    }

    #[test]
    fn empty_algorithm_list_is_rejected() {
        assert!(shift_sweep(100, &[None], &config(&[], 1)).is_err());
        assert!(size_sweep(&[1], None, &config(&[AlgorithmId::TwoPass], 1)).is_err());
    }
}
