//! The `varlab` command line.
//!
//! Every file-producing command records a canonical form of itself (all
//! flags, defaults included, output path excluded) in a `# command:`
//! metadata line. `varlab replay FILE` re-runs that command, and with
//! `--check` compares the result against the file.
//!
//! Exit status: 0 success, 1 I/O, 2 usage, 3 numerical failure (negative
//! variance, too little data, a loud t-test failure), 4 replay mismatch.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::accumulators::{compute, AlgorithmId, ShiftPolicy, Summation, VarianceOptions};
use crate::error::Error;
use crate::harness::{self, DatasetSpec, SweepConfig};
use crate::inference::{self, FailureMode};
use crate::oracle::{correct_digits, exact_variance, mantissa_table, to_decimal_string, MANTISSA_CSV_HEADER};
use crate::parallel::{default_threads, parallel_variance, plan_chunks};

mod lists;

pub use lists::{parse_count, Algorithms, Counts, Shifts};

#[derive(Debug, Parser)]
#[command(
    name = "varlab",
    version,
    about = "Variance algorithms, an exact oracle, and precision/timing experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a shifted Uniform(0,1) dataset, one value per line.
    Gen(GenArgs),
    /// Compute the variance of a dataset with one algorithm.
    Variance(VarianceArgs),
    /// Precision sweep over shift, size or group size (CSV).
    Sweep(SweepArgs),
    /// Wall-clock timings per algorithm, size and thread count (CSV).
    Bench(BenchArgs),
    /// Textbook one-pass S1/S2 fraction bits as the shift grows.
    Mantissa(MantissaArgs),
    /// One-sample two-tailed t-test using a chosen variance algorithm.
    Ttest(TtestArgs),
    /// Print shift-probe SQL queries for running against a database.
    ProbeSql(ProbeSqlArgs),
    /// Re-run the command recorded in a file's metadata.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SummationArg {
    Naive,
    Kahan,
}

/// Flags shared by every command that runs an algorithm.
#[derive(Debug, Args)]
pub struct AlgoOpts {
    /// Clamp a negative one-pass sum of squares to zero.
    #[arg(long, overrides_with = "no_clamp")]
    clamp: bool,
    /// Report negative one-pass results as they are (default).
    #[arg(long, overrides_with = "clamp")]
    no_clamp: bool,
    /// Summation used by the moment-based algorithms.
    #[arg(long, value_enum, default_value_t = SummationArg::Naive)]
    summation: SummationArg,
    /// Shift for shifted one-pass: first | prefix:K | explicit:VALUE.
    #[arg(long, default_value = "prefix:1000")]
    shift_policy: ShiftPolicy,
    /// Values per pairwise leaf.
    #[arg(long, default_value = "128", value_parser = lists::parse_positive)]
    leaf_size: usize,
    /// Values per group for total variance.
    #[arg(long, default_value = "10", value_parser = lists::parse_positive)]
    group_size: usize,
    /// Per-group algorithm for total variance.
    #[arg(long, default_value = "updating-wwh")]
    inner: AlgorithmId,
}

impl AlgoOpts {
    pub fn options(&self) -> VarianceOptions {
        VarianceOptions {
            clamp_negative: self.clamp,
            summation: match self.summation {
                SummationArg::Naive => Summation::Naive,
                SummationArg::Kahan => Summation::Compensated,
            },
            shift_policy: self.shift_policy,
            leaf_size: self.leaf_size,
            group_size: self.group_size,
            inner: self.inner,
        }
    }

    fn canonical(&self, words: &mut Vec<String>) {
        let summation = match self.summation {
            SummationArg::Naive => "naive",
            SummationArg::Kahan => "kahan",
        };
        words.push(if self.clamp { "--clamp" } else { "--no-clamp" }.into());
        push(words, "--summation", summation);
        push(words, "--shift-policy", self.shift_policy);
        push(words, "--leaf-size", self.leaf_size);
        push(words, "--group-size", self.group_size);
        push(words, "--inner", self.inner);
    }
}

/// A dataset file or a generated dataset.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// Read values from a file instead of generating them.
    #[arg(long, conflicts_with_all = ["size", "shift_exp", "seed"])]
    input: Option<PathBuf>,
    #[arg(long, value_parser = lists::parse_positive)]
    size: Option<usize>,
    /// Add 10^E to every value.
    #[arg(long, allow_negative_numbers = true)]
    shift_exp: Option<i32>,
    #[arg(long)]
    seed: Option<u64>,
}

impl DataArgs {
    fn load(&self, default: Option<(usize, Option<i32>)>) -> Result<(Vec<f64>, String), CliError> {
        if let Some(path) = &self.input {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            return Ok((harness::read_dataset(&text)?, path.display().to_string()));
        }
        let (size, shift) = match (self.size, default) {
            (Some(n), _) => (n, self.shift_exp),
            (None, Some((n, e))) => (n, self.shift_exp.or(e)),
            (None, None) => return Err(CliError::Usage("give --input or --size".into())),
        };
        let spec = DatasetSpec::new(size, shift, self.seed.unwrap_or(42));
        let label = format!(
            "generated size {} shift {} seed {}",
            spec.size,
            spec.shift_exponent.map_or("none".into(), |e| format!("1e{e}")),
            spec.seed
        );
        Ok((harness::generate(&spec), label))
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_parser = lists::parse_positive)]
    size: usize,
    /// Add 10^E to every value.
    #[arg(long, allow_negative_numbers = true)]
    shift_exp: Option<i32>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VarianceArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "two-pass")]
    algo: AlgorithmId,
    /// Worker threads; more than one uses the chunked parallel path.
    #[arg(long, default_value = "1", value_parser = lists::parse_positive)]
    threads: usize,
    /// Also score the result against the exact oracle.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    opts: AlgoOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Shift,
    Size,
    Group,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    mode: SweepMode,
    /// Dataset size (shift and group modes; default 10000).
    #[arg(long, value_parser = lists::parse_positive)]
    size: Option<usize>,
    /// Dataset sizes (size mode; default 10,100,...,1e6).
    #[arg(long, value_parser = Counts::parse)]
    sizes: Option<Counts>,
    /// Shift exponents (shift mode; default none,1..15).
    #[arg(long, value_parser = Shifts::parse)]
    shifts: Option<Shifts>,
    /// Fixed shift exponent (size and group modes; default 5).
    #[arg(long, allow_negative_numbers = true)]
    shift_exp: Option<i32>,
    /// Group sizes (group mode; default 2,10,100,1000).
    #[arg(long, value_parser = Counts::parse)]
    group_sizes: Option<Counts>,
    /// Algorithms (shift and size modes; default all).
    #[arg(long, value_parser = Algorithms::parse)]
    algos: Option<Algorithms>,
    /// First seed; repetition i uses seed + i.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "10", value_parser = lists::parse_positive)]
    reps: usize,
    /// Emit per-cell averages instead of per-seed rows.
    #[arg(long)]
    aggregate: bool,
    #[command(flatten)]
    opts: AlgoOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "1000000,10000000", value_parser = Counts::parse)]
    sizes: Counts,
    /// Algorithms; updating-yc and updating-wwh named explicitly cannot
    /// be combined with more than one thread. With `all` they only run
    /// single-threaded.
    #[arg(long, default_value = "all", value_parser = Algorithms::parse)]
    algos: Algorithms,
    /// Thread counts (default 1 and the hardware parallelism, or
    /// VARLAB_THREADS).
    #[arg(long, value_parser = Counts::parse)]
    threads: Option<Counts>,
    #[arg(long, default_value = "10", value_parser = lists::parse_positive)]
    reps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    opts: AlgoOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct MantissaArgs {
    #[arg(long, default_value = "10000", value_parser = lists::parse_positive)]
    size: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Shift exponents; the unshifted row always comes first.
    #[arg(long, default_value = "1..8", value_parser = Shifts::parse)]
    shifts: Shifts,
    #[arg(long, value_enum, default_value_t = TableFormat::Table)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TtestArgs {
    /// Generated data defaults to size 100, shift 1e12, seed 42.
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "two-pass")]
    algo: AlgorithmId,
    /// Hypothesized mean, or `mean` for the sample mean.
    #[arg(long, default_value = "mean", allow_negative_numbers = true)]
    mu0: String,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[command(flatten)]
    opts: AlgoOpts,
}

#[derive(Debug, Args)]
pub struct ProbeSqlArgs {
    #[arg(long, default_value = "t")]
    table: String,
    #[arg(long, default_value = "x")]
    column: String,
    /// Row count the critical value is computed for.
    #[arg(long, default_value = "100", value_parser = lists::parse_positive)]
    count: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value = "1..15", value_parser = Shifts::parse)]
    shifts: Shifts,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    file: PathBuf,
    /// Compare the regenerated output with FILE, ignoring columns flagged
    /// as nondeterministic.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(Error),
    #[error("{0}")]
    Io(String),
    #[error("LOUD FAILURE: {0}")]
    LoudFailure(String),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
}

impl CliError {
    fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::LoudFailure(_) => 3,
            CliError::ReplayMismatch(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(msg) => CliError::Usage(msg),
            Error::UnsupportedParallelAlgorithm(id) => CliError::Usage(format!(
                "{id} cannot run with more than one thread: each update depends on the previous \
                 one, so partial results over chunks cannot be merged"
            )),
            other => CliError::Numerical(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn push(words: &mut Vec<String>, flag: &str, value: impl ToString) {
    words.push(flag.to_string());
    words.push(value.to_string());
}

fn join_command(words: &[String]) -> CliResult<String> {
    shlex::try_join(words.iter().map(String::as_str))
        .map_err(|e| CliError::Usage(format!("cannot record command: {e}")))
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Reports go to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "varlab: {e}");
            e.exit_code()
        }
    }
}

/// Entry point of the `varlab` binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = run(std::env::args_os(), &mut out, &mut io::stderr());
    let _ = out.flush();
    code
}

fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    match command {
        Command::Gen(a) => with_output(&a.out, stdout, |w| cmd_gen(a, w)),
        Command::Variance(a) => cmd_variance(a, stdout, stderr),
        Command::Sweep(a) => with_output(&a.out, stdout, |w| cmd_sweep(a, w)),
        Command::Bench(a) => with_output(&a.out, stdout, |w| cmd_bench(a, w)),
        Command::Mantissa(a) => with_output(&a.out, stdout, |w| cmd_mantissa(a, w)),
        Command::Ttest(a) => cmd_ttest(a, stdout),
        Command::ProbeSql(a) => cmd_probe_sql(a, stdout),
        Command::Replay(a) => cmd_replay(a, stdout),
    }
}

/// Runs `f` against `path` if given, else stdout. A file is only created
/// once the command has succeeded.
fn with_output(
    path: &Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> CliResult,
) -> CliResult {
    match path {
        None => f(stdout),
        Some(p) => {
            let mut buf = Vec::new();
            f(&mut buf)?;
            let file = fs::File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            w.write_all(&buf).and_then(|_| w.flush()).map_err(|e| CliError::io(p, e))
        }
    }
}

fn gen_command(a: &GenArgs) -> Vec<String> {
    let mut words = vec!["varlab".to_string(), "gen".to_string()];
    push(&mut words, "--size", a.size);
    if let Some(e) = a.shift_exp {
        push(&mut words, "--shift-exp", e);
    }
    push(&mut words, "--seed", a.seed);
    words
}

fn cmd_gen(a: &GenArgs, w: &mut dyn Write) -> CliResult {
    let data = harness::generate(&DatasetSpec::new(a.size, a.shift_exp, a.seed));
    let meta = harness::metadata_lines(&join_command(&gen_command(a))?);
    harness::write_dataset(w, &meta, &data)?;
    Ok(())
}

fn run_algorithm(
    algo: AlgorithmId,
    data: &[f64],
    threads: usize,
    options: &VarianceOptions,
) -> CliResult<crate::VarianceResult> {
    let r = if threads > 1 {
        parallel_variance(data, algo, &plan_chunks(data.len(), threads), options)?
    } else {
        compute(algo, data, options)?
    };
    Ok(r)
}

fn cmd_variance(a: &VarianceArgs, w: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let (data, source) = a.data.load(None)?;
    let options = a.opts.options();
    let r = run_algorithm(a.algo, &data, a.threads, &options)?;
    writeln!(w, "source: {source}")?;
    writeln!(w, "algorithm: {}", a.algo)?;
    writeln!(w, "threads: {}", a.threads)?;
    writeln!(w, "count: {}", r.count)?;
    writeln!(w, "mean: {:?}", r.mean)?;
    writeln!(w, "sum_sq_dev: {:?}", r.sum_sq_dev)?;
    writeln!(w, "variance: {:?}", r.sample_variance)?;
    match r.stddev() {
        Some(s) => writeln!(w, "stddev: {s:?}")?,
        None => writeln!(w, "stddev: undefined")?,
    }
    writeln!(w, "negative_clamped: {}", r.negative_clamped)?;
    if a.oracle {
        let truth = exact_variance(&data)?;
        writeln!(w, "oracle_variance: {}", to_decimal_string(&truth, 30))?;
        writeln!(w, "digits: {:?}", correct_digits(r.sample_variance, &truth).digits)?;
    }
    if r.sample_variance < 0.0 {
        writeln!(
            stderr,
            "warning: negative variance {:?}; the sum of squares cancelled catastrophically",
            r.sample_variance
        )?;
    }
    if r.negative_clamped {
        writeln!(
            stderr,
            "warning: raw sum of squares {:?} was negative and has been clamped to zero",
            r.sum_sq_dev
        )?;
    }
    Ok(())
}

fn sweep_command(a: &SweepArgs) -> CliResult<(Vec<String>, Vec<harness::PrecisionRecord>)> {
    let reject = |flag: &str, present: bool| -> CliResult {
        if present {
            Err(CliError::Usage(format!("{flag} does not apply to this sweep mode")))
        } else {
            Ok(())
        }
    };
    let mut words: Vec<String> = ["varlab", "sweep", "--mode"].map(String::from).to_vec();
    let config = |algos: &Algorithms| SweepConfig {
        algorithms: algos.ids.clone(),
        seed: a.seed,
        repetitions: a.reps,
        options: a.opts.options(),
    };
    let default_algos = || Algorithms::parse("all").expect("valid");
    let records = match a.mode {
        SweepMode::Shift => {
            reject("--sizes", a.sizes.is_some())?;
            reject("--shift-exp", a.shift_exp.is_some())?;
            reject("--group-sizes", a.group_sizes.is_some())?;
            let size = a.size.unwrap_or(10_000);
            let shifts = a.shifts.clone().unwrap_or_else(|| Shifts::parse("none,1..15").expect("valid"));
            let algos = a.algos.clone().unwrap_or_else(default_algos);
            words.push("shift".into());
            push(&mut words, "--size", size);
            push(&mut words, "--shifts", &shifts);
            push(&mut words, "--algos", &algos);
            harness::shift_sweep(size, &shifts.0, &config(&algos))?
        }
        SweepMode::Size => {
            reject("--size", a.size.is_some())?;
            reject("--shifts", a.shifts.is_some())?;
            reject("--group-sizes", a.group_sizes.is_some())?;
            let sizes = a
                .sizes
                .clone()
                .unwrap_or_else(|| Counts(vec![10, 100, 1_000, 10_000, 100_000, 1_000_000]));
            let shift = a.shift_exp.unwrap_or(5);
            let algos = a.algos.clone().unwrap_or_else(default_algos);
            words.push("size".into());
            push(&mut words, "--sizes", &sizes);
            push(&mut words, "--shift-exp", shift);
            push(&mut words, "--algos", &algos);
            harness::size_sweep(&sizes.0, Some(shift), &config(&algos))?
        }
        SweepMode::Group => {
            reject("--sizes", a.sizes.is_some())?;
            reject("--shifts", a.shifts.is_some())?;
            reject("--algos", a.algos.is_some())?;
            let size = a.size.unwrap_or(10_000);
            let shift = a.shift_exp.unwrap_or(5);
            let groups = a.group_sizes.clone().unwrap_or(Counts(vec![2, 10, 100, 1000]));
            words.push("group".into());
            push(&mut words, "--size", size);
            push(&mut words, "--shift-exp", shift);
            push(&mut words, "--group-sizes", &groups);
            harness::group_size_sweep(size, Some(shift), &groups.0, &config(&default_algos()))?
        }
    };
    push(&mut words, "--seed", a.seed);
    push(&mut words, "--reps", a.reps);
    if a.aggregate {
        words.push("--aggregate".into());
    }
    a.opts.canonical(&mut words);
    Ok((words, records))
}

fn cmd_sweep(a: &SweepArgs, w: &mut dyn Write) -> CliResult {
    let (words, records) = sweep_command(a)?;
    let meta = harness::metadata_lines(&join_command(&words)?);
    if a.aggregate {
        harness::write_summary_csv(w, &meta, &harness::summarize(&records))?;
    } else {
        harness::write_precision_csv(w, &meta, &records)?;
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs, w: &mut dyn Write) -> CliResult {
    let threads = match &a.threads {
        Some(t) => t.clone(),
        None => {
            let n = default_threads();
            Counts(if n > 1 { vec![1, n] } else { vec![1] })
        }
    };
    if !a.algos.all && threads.0.iter().any(|&t| t > 1) {
        if let Some(&id) = a.algos.ids.iter().find(|id| !id.is_mergeable()) {
            return Err(Error::UnsupportedParallelAlgorithm(id).into());
        }
    }
    let options = a.opts.options();
    let records = harness::timing_sweep(&a.sizes.0, &a.algos.ids, &threads.0, a.reps, a.seed, &options)?;
    let mut words: Vec<String> = ["varlab", "bench"].map(String::from).to_vec();
    push(&mut words, "--sizes", &a.sizes);
    push(&mut words, "--algos", &a.algos);
    push(&mut words, "--threads", &threads);
    push(&mut words, "--reps", a.reps);
    push(&mut words, "--seed", a.seed);
    a.opts.canonical(&mut words);
    let meta = harness::metadata_lines(&join_command(&words)?);
    harness::write_timing_csv(w, &meta, &records)?;
    Ok(())
}

fn cmd_mantissa(a: &MantissaArgs, w: &mut dyn Write) -> CliResult {
    let exponents = a.shifts.exponents().map_err(CliError::Usage)?;
    let data = harness::generate(&DatasetSpec::new(a.size, None, a.seed));
    let rows = mantissa_table(&data, &exponents)?;
    match a.format {
        TableFormat::Table => {
            writeln!(
                w,
                "{:>5}  {:<15}  {:<15}  {:>24}  {:>24}",
                "shift", "s1_mantissa", "s2_mantissa", "s", "variance"
            )?;
            for r in &rows {
                writeln!(w, "{r}")?;
            }
        }
        TableFormat::Csv => {
            let mut words: Vec<String> = ["varlab", "mantissa"].map(String::from).to_vec();
            push(&mut words, "--size", a.size);
            push(&mut words, "--seed", a.seed);
            push(&mut words, "--shifts", &a.shifts);
            push(&mut words, "--format", "csv");
            for m in harness::metadata_lines(&join_command(&words)?) {
                writeln!(w, "# {m}")?;
            }
            writeln!(w, "{MANTISSA_CSV_HEADER}")?;
            for r in &rows {
                writeln!(w, "{}", r.csv_line())?;
            }
        }
    }
    Ok(())
}

fn cmd_ttest(a: &TtestArgs, w: &mut dyn Write) -> CliResult {
    let (data, source) = a.data.load(Some((100, Some(12))))?;
    let r = compute(a.algo, &data, &a.opts.options())?;
    let stats = inference::summarize(&r)?;
    let mu0 = if a.mu0 == "mean" {
        stats.mean
    } else {
        a.mu0
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--mu0 '{}' is not a number", a.mu0)))?
    };
    let t = inference::one_sample_ttest(&stats, mu0, a.alpha)?;
    writeln!(w, "source: {source}")?;
    writeln!(w, "algorithm: {}", a.algo)?;
    writeln!(w, "n: {}", stats.n)?;
    writeln!(w, "mean: {:?}", stats.mean)?;
    writeln!(w, "variance: {:?}", stats.variance)?;
    writeln!(w, "stddev: {:?}", stats.stddev)?;
    writeln!(w, "stderr: {:?}", stats.stderr)?;
    writeln!(w, "negative_clamped: {}", r.negative_clamped)?;
    writeln!(w, "mu0: {mu0:?}")?;
    writeln!(w, "alpha: {:?}", a.alpha)?;
    writeln!(w, "critical_value: {:?}", t.critical_value)?;
    writeln!(w, "t_statistic: {:?}", t.t_statistic)?;
    writeln!(w, "reject: {}", t.reject)?;
    writeln!(
        w,
        "acceptance_interval: [{:?}, {:?}]",
        t.acceptance_interval.0, t.acceptance_interval.1
    )?;
    writeln!(w, "acceptance_width: {:?}", t.acceptance_width())?;
    if t.failure_mode == FailureMode::LoudZeroStddev {
        let msg = format!(
            "standard deviation is zero but the mean {:?} differs from mu0 {mu0:?}; \
             the t statistic is infinite and the test cannot be evaluated",
            stats.mean
        );
        writeln!(w, "LOUD FAILURE: {msg}")?;
        return Err(CliError::LoudFailure(msg));
    }
    Ok(())
}

fn cmd_probe_sql(a: &ProbeSqlArgs, w: &mut dyn Write) -> CliResult {
    let exponents = a.shifts.exponents().map_err(CliError::Usage)?;
    if a.count < 2 {
        return Err(Error::InsufficientData(a.count).into());
    }
    let df = (a.count - 1) as u64;
    let t = inference::t_quantile(a.alpha, df)?;
    writeln!(
        w,
        "-- Shift probes for {}.{}: half-width of the {:?}-level confidence interval \
         of the mean after adding 10^e.",
        a.table,
        a.column,
        1.0 - a.alpha
    )?;
    writeln!(
        w,
        "-- Critical value t = {t:?} (two-tailed alpha {:?}, {df} degrees of freedom, {} rows).",
        a.alpha, a.count
    )?;
    writeln!(
        w,
        "-- Every query should return the same value; a zero, NULL or drifting result exposes cancellation."
    )?;
    for e in exponents {
        writeln!(
            w,
            "SELECT {e} AS shift_exponent, {t:?} * STDDEV_SAMP({c} + 1E{e}) / SQRT(COUNT({c})) AS half_width FROM {tbl};",
            c = a.column,
            tbl = a.table
        )?;
    }
    Ok(())
}

/// Blanks the columns listed in a `# nondeterministic-columns:` line.
fn mask_nondeterministic(text: &str) -> String {
    let columns: Vec<&str> = text
        .lines()
        .find_map(|l| l.strip_prefix("# nondeterministic-columns: "))
        .map(|c| c.split(',').collect())
        .unwrap_or_default();
    if columns.is_empty() {
        return text.to_string();
    }
    let mut masked = Vec::new();
    let mut indices: Option<Vec<usize>> = None;
    for line in text.lines() {
        if line.starts_with('#') {
            masked.push(line.to_string());
            continue;
        }
        match &indices {
            None => {
                indices = Some(
                    line.split(',')
                        .enumerate()
                        .filter(|(_, h)| columns.contains(h))
                        .map(|(i, _)| i)
                        .collect(),
                );
                masked.push(line.to_string());
            }
            Some(idx) => {
                let fields: Vec<&str> = line
                    .split(',')
                    .enumerate()
                    .map(|(i, f)| if idx.contains(&i) { "*" } else { f })
                    .collect();
                masked.push(fields.join(","));
            }
        }
    }
    masked.join("\n")
}

fn cmd_replay(a: &ReplayArgs, stdout: &mut dyn Write) -> CliResult {
    let original = fs::read_to_string(&a.file).map_err(|e| CliError::io(&a.file, e))?;
    let line = original
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# command: "))
        .ok_or_else(|| CliError::Usage(format!("{} has no '# command:' line", a.file.display())))?;
    let words = shlex::split(line)
        .ok_or_else(|| CliError::Usage(format!("cannot parse recorded command '{line}'")))?;
    let cli = Cli::try_parse_from(&words)
        .map_err(|e| CliError::Usage(format!("recorded command does not parse: {e}")))?;
    let out_flag = match &cli.command {
        Command::Gen(g) => &g.out,
        Command::Sweep(s) => &s.out,
        Command::Bench(b) => &b.out,
        Command::Mantissa(m) => &m.out,
        _ => return Err(CliError::Usage(format!("cannot replay '{line}'"))),
    };
    if out_flag.is_some() {
        return Err(CliError::Usage("recorded command names an output file".into()));
    }
    let mut regenerated = Vec::new();
    execute(&cli.command, &mut regenerated, &mut io::sink())?;
    let regenerated = String::from_utf8(regenerated).expect("utf-8 output");
    if a.check && mask_nondeterministic(&regenerated) != mask_nondeterministic(&original) {
        let first = regenerated
            .lines()
            .zip(original.lines())
            .position(|(x, y)| x != y)
            .map_or("line counts differ".to_string(), |i| format!("first difference at line {}", i + 1));
        return Err(CliError::ReplayMismatch(format!("{}: {first}", a.file.display())));
    }
    with_output(&a.out, stdout, |w| Ok(w.write_all(regenerated.as_bytes())?))?;
    Ok(())
}
