mod common;

use common::direct_sum_sq_dev;
use num_traits::{One, Zero};
use varlab::accumulators::{compute, textbook_one_pass, AlgorithmId, VarianceOptions};
use varlab::harness::{
    generate, group_size_sweep, metadata_lines, parse_precision_csv, read_dataset, shift_sweep,
    size_sweep, summarize, write_dataset, write_precision_csv, DatasetSpec, SweepConfig,
};
use varlab::oracle::{correct_digits, exact_from_f64, exact_variance, fraction_hex, mantissa_table};

fn small_config(reps: usize) -> SweepConfig {
    SweepConfig { repetitions: reps, ..SweepConfig::default() }
}

#[test]
fn oracle_on_decimal_inputs_is_not_the_decimal_answer() {
    let data = [0.1, 0.2, 0.3];
    let v = exact_variance(&data).unwrap();
    let hundredth = num_rational::BigRational::new(1.into(), 100.into());
    assert_ne!(v, hundredth);
    assert_eq!(v, direct_sum_sq_dev(&data) / num_rational::BigRational::from_integer(2.into()));
    assert!((num_traits::ToPrimitive::to_f64(&v).unwrap() - 0.01).abs() < 1e-15);
}

#[test]
fn oracle_edge_values() {
    assert!(exact_variance(&[1.0, 2.0, 3.0]).unwrap().is_one());
    assert!(exact_variance(&[0.3, 0.3]).unwrap().is_zero());
    assert!(exact_variance(&[]).is_err());
    assert!(exact_variance(&[1.0]).is_err());
}

#[test]
fn digits_are_monotone_in_error() {
    let truth = exact_from_f64(1.0) / exact_from_f64(12.0);
    let mut last = 18.0;
    for k in (0..40).rev() {
        let computed = 1.0 / 12.0 + 2f64.powi(-k);
        let d = correct_digits(computed, &truth).digits;
        assert!(d <= last + 1e-12, "k={k}");
        last = d;
    }
    let d = correct_digits(0.0834, &truth);
    assert!((d.relative_error - 8.0e-4).abs() < 1e-6);
    assert!((d.digits - 3.097).abs() < 1e-3);
    assert_eq!(correct_digits(-47.52, &truth).digits, 0.0);
}

#[test]
fn mantissa_rows() {
    let rows = mantissa_table(&[1.0, 2.0], &[0]).unwrap();
    assert_eq!(rows[0].s1_mantissa_hex, fraction_hex(5.0));
    assert_eq!(rows[0].s2_mantissa_hex, fraction_hex(4.5));
    // 10^0 = 1 shifts the data to [2, 3]
    assert_eq!((rows[1].s, rows[1].variance), (0.5, 0.5));

    let data = generate(&DatasetSpec::new(10_000, None, 42));
    let shifts: Vec<i32> = (1..=8).collect();
    let rows = mantissa_table(&data, &shifts).unwrap();
    assert_eq!(rows, mantissa_table(&data, &shifts).unwrap());
    let truth = exact_variance(&data).unwrap();
    assert!(correct_digits(rows[0].variance, &truth).digits >= 12.0);
    for row in &rows {
        for hex in [&row.s1_mantissa_hex, &row.s2_mantissa_hex] {
            assert!(hex.starts_with("0x") && hex.len() == 15, "{hex}");
        }
        if row.mantissas_equal() {
            assert!(correct_digits(row.variance, &truth).digits == 0.0);
        }
    }
    let last = rows.last().unwrap();
    assert!(correct_digits(last.variance, &truth).digits < 1.0);
}

#[test]
fn textbook_on_small_integers() {
    let r = textbook_one_pass(&[1.0, 2.0, 3.0], false).unwrap();
    assert_eq!(r.sample_variance, 1.0);
    assert_eq!(r.sum_sq_dev, 2.0);
}

#[test]
fn dataset_file_round_trip() {
    let data = generate(&DatasetSpec::new(257, Some(9), 7));
    let mut buf = Vec::new();
    write_dataset(&mut buf, &metadata_lines("varlab gen --size 257 --shift-exp 9 --seed 7"), &data).unwrap();
    let back = read_dataset(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), data.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
}

#[test]
fn shift_sweep_shape_and_trend() {
    let cfg = small_config(3);
    let shifts = [None, Some(4), Some(12)];
    let records = shift_sweep(2000, &shifts, &cfg).unwrap();
    assert_eq!(records.len(), shifts.len() * AlgorithmId::ALL.len() * 3);
    let cells = summarize(&records);
    assert_eq!(cells.len(), shifts.len() * AlgorithmId::ALL.len());
    let cell = |a: AlgorithmId, e: Option<i32>| {
        cells.iter().find(|c| c.algorithm == a && c.shift_exponent == e).unwrap().mean_digits
    };
    assert!(cell(AlgorithmId::TwoPass, None) >= 12.0);
    assert!(cell(AlgorithmId::Textbook, Some(12)) < 3.0);
    assert!(cell(AlgorithmId::Textbook, Some(4)) < cell(AlgorithmId::TwoPass, Some(4)));
    assert!(cell(AlgorithmId::Pairwise, Some(12)) > cell(AlgorithmId::Textbook, Some(12)) + 3.0);
}

#[test]
fn sweeps_are_reproducible_and_round_trip_through_csv() {
    let cfg = small_config(2);
    let a = size_sweep(&[10, 100, 1000], Some(5), &cfg).unwrap();
    let b = size_sweep(&[10, 100, 1000], Some(5), &cfg).unwrap();
    assert_eq!(a, b);
    let mut buf = Vec::new();
    write_precision_csv(&mut buf, &metadata_lines("test"), &a).unwrap();
    let back = parse_precision_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn group_size_extremes() {
    let cfg = small_config(2);
    let data = generate(&DatasetSpec::new(500, Some(5), cfg.seed));
    let inner = compute(AlgorithmId::UpdatingWwh, &data, &VarianceOptions::default()).unwrap();
    let records = group_size_sweep(500, Some(5), &[1, 500], &cfg).unwrap();
    assert_eq!(records.len(), 4);
    assert!(records.iter().all(|r| r.algorithm == AlgorithmId::TotalVariance));
    let whole = records.iter().find(|r| r.group_size == Some(500) && r.spec.seed == cfg.seed).unwrap();
    assert_eq!(whole.computed_variance.to_bits(), inner.sample_variance.to_bits());
    let singles = records.iter().find(|r| r.group_size == Some(1) && r.spec.seed == cfg.seed).unwrap();
    assert!(singles.digits >= 8.0, "{singles:?}");
    assert!(group_size_sweep(500, None, &[0], &cfg).is_err());
    assert!(group_size_sweep(500, None, &[501], &cfg).is_err());
}
