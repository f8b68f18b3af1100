//! Dataset generation and the experiment drivers.
//!
//! Sweeps score every algorithm against the exact oracle on freshly
//! generated shifted-uniform data and emit one [`PrecisionRecord`] per
//! (dataset, algorithm). Timing runs emit [`TimingRecord`]s.

mod dataset;
mod records;
mod sweep;
mod timing;

pub use dataset::{generate, read_dataset, write_dataset, DatasetSpec, PRNG_ID};
pub use records::{
    metadata_lines, parse_precision_csv, summarize, write_precision_csv, write_summary_csv,
    write_timing_csv, PrecisionRecord, SweepSummary, TimingRecord, PRECISION_CSV_HEADER,
    SUMMARY_CSV_HEADER, TIMING_CSV_HEADER,
};
pub use sweep::{group_size_sweep, score, shift_sweep, size_sweep, SweepConfig};
pub use timing::timing_sweep;
