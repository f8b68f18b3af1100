//! Exact reference values and precision metrics.
//!
//! Every finite `f64` is a dyadic rational, so the variance of a dataset of
//! stored doubles has an exact rational value. [`exact_variance`] computes it
//! with big integers: all values are scaled to a common power of two, which
//! keeps the whole evaluation in integer arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::accumulators::{check_batch, check_finite, MomentState, Summation};
use crate::error::{Error, Result};

pub type ExactRational = BigRational;

/// Most decimal digits a double can carry.
pub const MAX_DIGITS: f64 = 17.0;

/// The exact value of a finite double.
pub fn exact_from_f64(x: f64) -> ExactRational {
    assert!(x.is_finite(), "non-finite value has no rational value");
    let (mantissa, exponent, sign) = Float::integer_decode(x);
    let mut numer = BigInt::from(mantissa);
    if sign < 0 {
        numer = -numer;
    }
    if exponent >= 0 {
        BigRational::from_integer(numer << exponent as usize)
    } else {
        BigRational::new(numer, BigInt::one() << (-exponent) as usize)
    }
}

/// `data` as integers over a common denominator `2^shift`.
struct ScaledData {
    ints: Vec<BigInt>,
    shift: usize,
}

fn scale_to_integers(data: &[f64]) -> ScaledData {
    let decoded: Vec<(u64, i16, i8)> = data.iter().map(|&x| Float::integer_decode(x)).collect();
    let min_exp = decoded
        .iter()
        .filter(|(m, _, _)| *m != 0)
        .map(|&(_, e, _)| e)
        .min()
        .unwrap_or(0)
        .min(0);
    let ints = decoded
        .into_iter()
        .map(|(m, e, sign)| {
            let v = BigInt::from(m) << (i32::from(e) - i32::from(min_exp)) as usize;
            if sign < 0 {
                -v
            } else {
                v
            }
        })
        .collect();
    ScaledData {
        ints,
        shift: (-i32::from(min_exp)) as usize,
    }
}

/// Exact sum of squared deviations `Σ(xᵢ − x̄)²` of the stored doubles.
pub fn exact_sum_sq_dev(data: &[f64]) -> Result<ExactRational> {
    check_batch(data)?;
    let scaled = scale_to_integers(data);
    let mut sum = BigInt::zero();
    let mut sum_sq = BigInt::zero();
    for a in &scaled.ints {
        sum_sq += a * a;
        sum += a;
    }
    let n = BigInt::from(data.len());
    // S = (N·Σa² − (Σa)²) / (N · 4^shift)
    let numer = &n * sum_sq - &sum * &sum;
    let denom = n << (2 * scaled.shift);
    Ok(BigRational::new(numer, denom))
}

/// Exact sample variance `S/(N − 1)` of the stored doubles.
pub fn exact_variance(data: &[f64]) -> Result<ExactRational> {
    let s = exact_sum_sq_dev(data)?;
    Ok(s / BigInt::from(data.len() - 1))
}

pub fn exact_mean(data: &[f64]) -> Result<ExactRational> {
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_finite(data)?;
    let scaled = scale_to_integers(data);
    let sum: BigInt = scaled.ints.iter().sum();
    Ok(BigRational::new(
        sum,
        BigInt::from(data.len()) << scaled.shift,
    ))
}

/// Correct decimal digits of a computed value against the exact truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigitScore {
    pub digits: f64,
    pub relative_error: f64,
}

/// `digits = min(17, max(0, −log₁₀(|computed − truth| / |truth|)))`.
///
/// A zero truth scores 17 digits for an exact zero and 0 digits otherwise.
pub fn correct_digits(computed: f64, truth: &ExactRational) -> DigitScore {
    let lost = DigitScore {
        digits: 0.0,
        relative_error: f64::INFINITY,
    };
    if !computed.is_finite() {
        return lost;
    }
    if truth.is_zero() {
        return if computed == 0.0 {
            DigitScore {
                digits: MAX_DIGITS,
                relative_error: 0.0,
            }
        } else {
            lost
        };
    }
    let err = (exact_from_f64(computed) - truth).abs() / truth.abs();
    let relative_error = err.to_f64().unwrap_or(f64::INFINITY);
    let digits = if relative_error == 0.0 {
        MAX_DIGITS
    } else {
        (-relative_error.log10()).clamp(0.0, MAX_DIGITS)
    };
    DigitScore {
        digits,
        relative_error,
    }
}

/// Renders `r` in scientific notation with `sig` significant digits,
/// rounding half away from zero, e.g. `8.33333333333333333333333333333e-2`.
pub fn to_decimal_string(r: &ExactRational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let ten = BigInt::from(10);

    // Decimal exponent e with 10^e <= a < 10^(e+1).
    let approx = a.to_f64().map(|f| f.log10().floor()).unwrap_or(0.0);
    let mut e = if approx.is_finite() { approx as i64 } else { 0 };
    let pow = |k: i64| -> BigRational {
        let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    };
    while a < pow(e) {
        e -= 1;
    }
    while a >= pow(e + 1) {
        e += 1;
    }

    let scaled = &a * pow(sig as i64 - 1 - e);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut digits = if BigInt::from(2) * rem >= *scaled.denom() {
        q + 1
    } else {
        q
    };
    if digits == num_traits::pow(ten.clone(), sig) {
        digits /= &ten;
        e += 1;
    }
    let s = digits.to_str_radix(10);
    let (head, tail) = s.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// `10^e` correctly rounded to a double.
pub fn pow10(e: i32) -> f64 {
    format!("1e{e}").parse().expect("valid float literal")
}

/// The 52-bit fraction field of a double as `0x` plus 13 lowercase hex
/// digits.
pub fn fraction_hex(x: f64) -> String {
    format!("0x{:013x}", x.to_bits() & ((1u64 << 52) - 1))
}

/// One row of the textbook one-pass cancellation table.
#[derive(Debug, Clone, PartialEq)]
pub struct MantissaRow {
    /// `None` for the unshifted data.
    pub shift_exponent: Option<i32>,
    pub s1_mantissa_hex: String,
    pub s2_mantissa_hex: String,
    pub s: f64,
    pub variance: f64,
}

impl MantissaRow {
    pub fn shift_label(&self) -> String {
        match self.shift_exponent {
            Some(e) => e.to_string(),
            None => "none".to_string(),
        }
    }

    /// Whether S₁ and S₂ have identical fraction bits.
    pub fn mantissas_equal(&self) -> bool {
        self.s1_mantissa_hex == self.s2_mantissa_hex
    }
}

impl fmt::Display for MantissaRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>5}  {}  {}  {:>24}  {:>24}",
            self.shift_label(),
            self.s1_mantissa_hex,
            self.s2_mantissa_hex,
            format!("{:?}", self.s),
            format!("{:?}", self.variance),
        )
    }
}

pub const MANTISSA_CSV_HEADER: &str = "shift_exponent,s1_mantissa,s2_mantissa,s,variance";

impl MantissaRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{:.16e},{:.16e}",
            self.shift_label(),
            self.s1_mantissa_hex,
            self.s2_mantissa_hex,
            self.s,
            self.variance
        )
    }
}

/// Textbook one-pass on `data` and on `data + 10^e` for each `e`, showing
/// how many leading bits S₁ and S₂ share as the shift grows. The first row
/// is the unshifted data.
pub fn mantissa_table(data: &[f64], shift_exponents: &[i32]) -> Result<Vec<MantissaRow>> {
    check_batch(data)?;
    let row = |shift_exponent: Option<i32>, values: &[f64]| -> Result<MantissaRow> {
        let mut state = MomentState::new(0.0, Summation::Naive);
        for &x in values {
            state.push(x)?;
        }
        let terms = state.partial_terms();
        let r = state.finish(false)?;
        Ok(MantissaRow {
            shift_exponent,
            s1_mantissa_hex: fraction_hex(terms.s1),
            s2_mantissa_hex: fraction_hex(terms.s2),
            s: r.sum_sq_dev,
            variance: r.sample_variance,
        })
    };
    let mut rows = vec![row(None, data)?];
    for &e in shift_exponents {
        let offset = pow10(e);
        let shifted: Vec<f64> = data.iter().map(|x| x + offset).collect();
        rows.push(row(Some(e), &shifted)?);
    }
    Ok(rows)
}
