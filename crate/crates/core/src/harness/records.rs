//! Experiment records and their CSV encoding.
//!
//! Every CSV starts with `#` metadata lines, then a mandatory header row.
//! Floats use 17 significant digits so they round-trip exactly.

use std::io::{self, Write};

use super::dataset::{DatasetSpec, PRNG_ID};
use crate::accumulators::AlgorithmId;
use crate::error::{Error, Result};

pub const PRECISION_CSV_HEADER: &str =
    "algorithm,size,shift_exponent,seed,group_size,computed_variance,oracle_variance,digits";
pub const SUMMARY_CSV_HEADER: &str =
    "algorithm,size,shift_exponent,group_size,repetitions,mean_digits,min_digits,max_digits";
pub const TIMING_CSV_HEADER: &str =
    "algorithm,size,threads,repetitions,mean_wall_seconds,stddev_wall_seconds";

/// One (dataset, algorithm) precision measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionRecord {
    pub algorithm: AlgorithmId,
    pub spec: DatasetSpec,
    /// Set for total variance only.
    pub group_size: Option<usize>,
    pub computed_variance: f64,
    /// Exact variance, 30 significant digits.
    pub oracle_variance: String,
    pub digits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub algorithm: AlgorithmId,
    pub size: usize,
    pub threads: usize,
    pub repetitions: usize,
    pub mean_wall_seconds: f64,
    pub stddev_wall_seconds: f64,
}

/// Digit scores of one sweep cell averaged over its seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub algorithm: AlgorithmId,
    pub size: usize,
    pub shift_exponent: Option<i32>,
    pub group_size: Option<usize>,
    pub repetitions: usize,
    pub mean_digits: f64,
    pub min_digits: f64,
    pub max_digits: f64,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl PrecisionRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.16e},{},{:.16e}",
            self.algorithm,
            self.spec.size,
            opt(self.spec.shift_exponent),
            self.spec.seed,
            opt(self.group_size),
            self.computed_variance,
            self.oracle_variance,
            self.digits
        )
    }
}

impl TimingRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.16e},{:.16e}",
            self.algorithm,
            self.size,
            self.threads,
            self.repetitions,
            self.mean_wall_seconds,
            self.stddev_wall_seconds
        )
    }
}

impl SweepSummary {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.16e},{:.16e},{:.16e}",
            self.algorithm,
            self.size,
            opt(self.shift_exponent),
            opt(self.group_size),
            self.repetitions,
            self.mean_digits,
            self.min_digits,
            self.max_digits
        )
    }
}

/// Averages consecutive records that share algorithm, size, shift and
/// group size (the sweeps emit seeds of one cell contiguously).
pub fn summarize(records: &[PrecisionRecord]) -> Vec<SweepSummary> {
    let key = |r: &PrecisionRecord| (r.algorithm, r.spec.size, r.spec.shift_exponent, r.group_size);
    let mut out: Vec<SweepSummary> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    for r in records {
        match out.last_mut() {
            Some(s) if (s.algorithm, s.size, s.shift_exponent, s.group_size) == key(r) => {
                s.repetitions += 1;
                s.min_digits = s.min_digits.min(r.digits);
                s.max_digits = s.max_digits.max(r.digits);
                *sums.last_mut().unwrap() += r.digits;
            }
            _ => {
                out.push(SweepSummary {
                    algorithm: r.algorithm,
                    size: r.spec.size,
                    shift_exponent: r.spec.shift_exponent,
                    group_size: r.group_size,
                    repetitions: 1,
                    mean_digits: 0.0,
                    min_digits: r.digits,
                    max_digits: r.digits,
                });
                sums.push(r.digits);
            }
        }
    }
    for (s, total) in out.iter_mut().zip(sums) {
        s.mean_digits = total / s.repetitions as f64;
    }
    out
}

/// Standard metadata block: tool version, generator, and the command that
/// reproduces the file.
pub fn metadata_lines(command: &str) -> Vec<String> {
    vec![
        format!("varlab {}", env!("CARGO_PKG_VERSION")),
        format!("prng: {PRNG_ID}"),
        format!("command: {command}"),
    ]
}

fn write_csv<W: Write + ?Sized>(
    w: &mut W,
    metadata: &[String],
    header: &str,
    lines: impl Iterator<Item = String>,
) -> io::Result<()> {
    for m in metadata {
        writeln!(w, "# {m}")?;
    }
    writeln!(w, "{header}")?;
    for line in lines {
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_precision_csv<W: Write + ?Sized>(
    w: &mut W,
    metadata: &[String],
    records: &[PrecisionRecord],
) -> io::Result<()> {
    write_csv(w, metadata, PRECISION_CSV_HEADER, records.iter().map(|r| r.csv_line()))
}

pub fn write_summary_csv<W: Write + ?Sized>(
    w: &mut W,
    metadata: &[String],
    summaries: &[SweepSummary],
) -> io::Result<()> {
    write_csv(w, metadata, SUMMARY_CSV_HEADER, summaries.iter().map(|s| s.csv_line()))
}

pub fn write_timing_csv<W: Write + ?Sized>(
    w: &mut W,
    metadata: &[String],
    records: &[TimingRecord],
) -> io::Result<()> {
    let mut meta = metadata.to_vec();
    meta.push("nondeterministic-columns: mean_wall_seconds,stddev_wall_seconds".into());
    write_csv(w, &meta, TIMING_CSV_HEADER, records.iter().map(|r| r.csv_line()))
}

/// Reads back a file written by [`write_precision_csv`].
pub fn parse_precision_csv(text: &str) -> Result<Vec<PrecisionRecord>> {
    let bad = |line: &str| Error::domain(format!("malformed precision row '{line}'"));
    let mut rows = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    match rows.next() {
        Some(h) if h == PRECISION_CSV_HEADER => {}
        _ => return Err(Error::domain("missing precision CSV header")),
    }
    rows.map(|line| {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad(line));
        }
        let opt_parse = |s: &str| -> Result<Option<i64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad(line))
            }
        };
        Ok(PrecisionRecord {
            algorithm: f[0].parse()?,
            spec: DatasetSpec {
                size: f[1].parse().map_err(|_| bad(line))?,
                shift_exponent: opt_parse(f[2])?.map(|e| e as i32),
                seed: f[3].parse().map_err(|_| bad(line))?,
            },
            group_size: opt_parse(f[4])?.map(|g| g as usize),
            computed_variance: f[5].parse().map_err(|_| bad(line))?,
            oracle_variance: f[6].to_string(),
            digits: f[7].parse().map_err(|_| bad(line))?,
        })
    })
    .collect()
}
