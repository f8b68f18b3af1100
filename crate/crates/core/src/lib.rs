//! Variance accumulators for every classic representation (two-pass,
//! textbook and shifted one-pass, pairwise updating, Youngs-Cramer and
//! Welford updating, total variance), an exact-rational reference oracle,
//! a precision and timing harness, and the inference measures built on top
//! of variance.
//!
//! All accumulator states are plain values: they can be cloned, sent across
//! threads, and merged where the representation allows it.

pub mod accumulators;
pub mod cli;
mod error;
pub mod harness;
pub mod inference;
pub mod oracle;
pub mod parallel;

pub use accumulators::{
    compute, AlgorithmId, GroupSummary, MomentState, PairState, PairwiseStreamState, ShiftPolicy,
    Summation, VarianceOptions, VarianceResult, WelfordState,
};
pub use error::{Error, Result};
pub use oracle::{correct_digits, exact_variance, DigitScore, ExactRational};
