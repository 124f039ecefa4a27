//! Seeded comparison-count experiments and tab-separated tables.
//!
//! Trial `t` at size `n` shuffles `0..n` with a ChaCha8 generator seeded from
//! `(seed, n)` on stream `t`, so every algorithm, strategy and factor sees the
//! same inputs for the same seed, and results do not depend on how trials are
//! scheduled across threads.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use itertools::Itertools;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    c_of_x, lower_bound_log_factorial, normalized, worst_case_w, x_n, NumericUpperBound,
};
use crate::exact::{to_decimal, to_f64, ExactAnalyzer};
use crate::par::{map_indices, Execution};
use crate::probability::{batch_size, DistTable};
use crate::sorter::{Algorithm, Sorter};
use crate::{Error, Rational, Result, Schedule, Strategy};

/// Description of the input generator, for run metadata.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed ^ mix(n)), stream = trial";

/// Largest size enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 8;

/// `max(10, min(10000, 10^7 / n))`.
pub fn default_trials(n: u64) -> u64 {
    (10_000_000 / n.max(1)).clamp(10, 10_000)
}

/// `count` sizes spaced evenly in `log n` from `from` to `to`, deduplicated.
pub fn log_spaced(from: u64, to: u64, count: usize) -> Result<Vec<u64>> {
    if from == 0 || to < from || count == 0 {
        return Err(Error::Config(format!(
            "log-spaced range {from}..{to} with {count} points is empty"
        )));
    }
    if count == 1 {
        return Ok(vec![from]);
    }
    let (a, b) = ((from as f64).ln(), (to as f64).ln());
    let mut out: Vec<u64> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as u64)
        .map(|n| n.clamp(from, to))
        .collect();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub sizes: Vec<u64>,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub schedule: Schedule,
    /// Trials per size; [`default_trials`] when `None`.
    pub trials: Option<u64>,
    pub seed: u64,
    /// Enumerate all `n!` inputs for `n <= EXHAUSTIVE_LIMIT`.
    pub exhaustive: bool,
    pub execution: Execution,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            sizes: Vec::new(),
            algorithm: Algorithm::MergeInsertion,
            strategy: Strategy::Left,
            schedule: Schedule::standard(),
            trials: None,
            seed: 0,
            exhaustive: true,
            execution: Execution::Parallel,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::Config("no input sizes given".into()));
        }
        if self.sizes.contains(&0) {
            return Err(Error::Config("input sizes must be at least 1".into()));
        }
        if self.sizes.iter().any(|&n| n >= u32::MAX as u64) {
            return Err(Error::Config("input sizes must fit in 32 bits".into()));
        }
        if self.trials == Some(0) {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(())
    }

    fn sorter(&self) -> Sorter {
        Sorter::new(self.strategy, self.schedule)
    }

    pub fn is_exhaustive(&self, n: u64) -> bool {
        self.exhaustive && n <= EXHAUSTIVE_LIMIT
    }

    pub fn trials_for(&self, n: u64) -> u64 {
        self.trials.unwrap_or_else(|| default_trials(n))
    }
}

/// The input for trial `trial` at size `n`.
pub fn trial_input(seed: u64, n: u64, trial: u64) -> Vec<u32> {
    // splitmix64 finalizer, so neighbouring sizes get unrelated seeds
    let mut z = n.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ z);
    rng.set_stream(trial);
    let mut v: Vec<u32> = (0..n as u32).collect();
    v.shuffle(&mut rng);
    v
}

/// Comparison count of every trial at size `n`, in trial order. In
/// exhaustive mode the trials are all permutations in lexicographic order.
pub fn trial_counts(cfg: &ExperimentConfig, n: u64) -> Result<Vec<u64>> {
    cfg.validate()?;
    let sorter = cfg.sorter();
    let algorithm = cfg.algorithm;
    if cfg.is_exhaustive(n) {
        return (0..n as u32)
            .permutations(n as usize)
            .map(|p| sorter.count(algorithm, &p))
            .collect();
    }
    let seed = cfg.seed;
    map_indices(cfg.execution, cfg.trials_for(n), |t| {
        sorter.count(algorithm, &trial_input(seed, n, t))
    })
    .into_iter()
    .collect()
}

/// Summary of the comparison counts at one size.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialStats {
    pub n: u64,
    pub trials: u64,
    pub sum: u128,
    pub sum_sq: u128,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub std_dev: f64,
    /// `(mean - n log n) / n`.
    pub normalized_mean: f64,
}

impl TrialStats {
    pub fn from_counts(n: u64, counts: &[u64]) -> Self {
        let trials = counts.len() as u64;
        let sum: u128 = counts.iter().map(|&c| c as u128).sum();
        let sum_sq: u128 = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
        let mean = sum as f64 / trials as f64;
        let std_dev = if trials > 1 {
            let t = trials as u128;
            let spread = t * sum_sq - sum * sum;
            (spread as f64 / (t * (t - 1)) as f64).sqrt()
        } else {
            0.0
        };
        TrialStats {
            n,
            trials,
            sum,
            sum_sq,
            mean,
            std_dev,
            normalized_mean: normalized(mean, n),
        }
    }

    /// The mean as an exact fraction.
    pub fn exact_mean(&self) -> Rational {
        Rational::new(BigInt::from(self.sum), BigInt::from(self.trials))
    }

    pub fn std_error(&self) -> f64 {
        self.std_dev / (self.trials as f64).sqrt()
    }

    /// Standard error of the normalized mean.
    pub fn normalized_std_error(&self) -> f64 {
        self.std_error() / self.n as f64
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialStats>> {
    cfg.validate()?;
    cfg.sizes
        .iter()
        .map(|&n| Ok(TrialStats::from_counts(n, &trial_counts(cfg, n)?)))
        .collect()
}

/// Rectangular table of already formatted cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Parse(format!(
                "row has {} cells, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Cells of `name` parsed as `f64`.
    pub fn column_f64(&self, name: &str) -> Result<Vec<f64>> {
        let c = self
            .column(name)
            .ok_or_else(|| Error::Parse(format!("no column '{name}'")))?;
        self.rows
            .iter()
            .map(|r| {
                r[c].parse::<f64>()
                    .map_err(|_| Error::Parse(format!("'{}' in column '{name}' is not a number", r[c])))
            })
            .collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        out
    }
}

/// Formats a float so that parsing it back yields the same value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn write_tsv<W: Write>(table: &Table, mut w: W) -> std::io::Result<u64> {
    let text = table.to_tsv();
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(text.len() as u64)
}

/// Writes `table` to `path`; returns the number of bytes written.
pub fn emit_tsv(table: &Table, path: &Path) -> Result<u64> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    write_tsv(table, BufWriter::new(file)).map_err(io)
}

pub fn parse_tsv(text: &str) -> Result<Table> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing header row".into()))?;
    let mut table = Table::new(header.split('\t'));
    for (i, line) in lines.enumerate() {
        table
            .push(line.split('\t').map(str::to_owned).collect())
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))?;
    }
    Ok(table)
}

fn factor_label(schedule: &Schedule) -> String {
    format!("f{}", fmt_f64(schedule.factor_f64()))
}

/// Normalized MergeInsertion means, one column per schedule factor.
pub fn sweep_factor(
    sizes: &[u64],
    factors: &[Schedule],
    strategy: Strategy,
    trials: Option<u64>,
    seed: u64,
    execution: Execution,
) -> Result<Table> {
    let mut table = Table::new(
        std::iter::once("num_elements".to_string()).chain(factors.iter().map(factor_label)),
    );
    for &n in sizes {
        let mut row = vec![n.to_string()];
        for &schedule in factors {
            let cfg = ExperimentConfig {
                sizes: vec![n],
                strategy,
                schedule,
                trials,
                seed,
                execution,
                ..ExperimentConfig::default()
            };
            let stats = TrialStats::from_counts(n, &trial_counts(&cfg, n)?);
            row.push(fmt_f64(stats.normalized_mean));
        }
        table.push(row)?;
    }
    Ok(table)
}

/// Column names of [`compare_algorithms`].
pub const COMPARE_COLUMNS: [&str; 4] = ["num_elements", "MI", "combined", "combined_f1.03"];

/// Normalized means of MergeInsertion, the combined algorithm, and the
/// combined algorithm with factor 1.03.
pub fn compare_algorithms(
    sizes: &[u64],
    strategy: Strategy,
    trials: Option<u64>,
    seed: u64,
    execution: Execution,
) -> Result<Table> {
    let f103 = Schedule::with_factor(103, 100)?;
    let variants = [
        (Algorithm::MergeInsertion, Schedule::standard()),
        (Algorithm::Combined, Schedule::standard()),
        (Algorithm::Combined, f103),
    ];
    let mut table = Table::new(COMPARE_COLUMNS);
    for &n in sizes {
        let mut row = vec![n.to_string()];
        for (algorithm, schedule) in variants {
            let cfg = ExperimentConfig {
                sizes: vec![n],
                algorithm,
                strategy,
                schedule,
                trials,
                seed,
                execution,
                ..ExperimentConfig::default()
            };
            let stats = TrialStats::from_counts(n, &trial_counts(&cfg, n)?);
            row.push(fmt_f64(stats.normalized_mean));
        }
        table.push(row)?;
    }
    Ok(table)
}

/// Per-size summary of an experiment.
pub fn stats_table(stats: &[TrialStats]) -> Table {
    let mut table = Table::new([
        "num_elements",
        "trials",
        "mean",
        "std_dev",
        "normalized_mean",
        "normalized_std_error",
    ]);
    for s in stats {
        table.rows.push(vec![
            s.n.to_string(),
            s.trials.to_string(),
            fmt_f64(s.mean),
            fmt_f64(s.std_dev),
            fmt_f64(s.normalized_mean),
            fmt_f64(s.normalized_std_error()),
        ]);
    }
    table
}

/// `n`, `F(n) n!`, `F(n)` and its normalized value.
pub fn exact_table(sizes: &[u64], strategy: Strategy) -> Result<Table> {
    let mut analyzer = ExactAnalyzer::new(strategy);
    let mut table = Table::new(["num_elements", "F_times_factorial", "F", "normalized"]);
    for &n in sizes {
        let f = analyzer.exact_f(n)?;
        table.push(vec![
            n.to_string(),
            analyzer.f_times_factorial(n)?.to_string(),
            to_decimal(&f, 12),
            fmt_f64(normalized(to_f64(&f), n)),
        ])?;
    }
    Ok(table)
}

/// A distribution column request such as `Y21` or `X3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistColumn {
    X(u64),
    Y(u64),
    /// Mean of `Y_i` for every `i`.
    MeanY,
}

impl std::str::FromStr for DistColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad distribution column '{s}' (expected X<i>, Y<i> or meanY)"));
        if s == "meanY" {
            return Ok(DistColumn::MeanY);
        }
        let (kind, idx) = s.split_at(1.min(s.len()));
        let i = idx.parse::<u64>().map_err(|_| bad())?;
        match kind {
            "X" => Ok(DistColumn::X(i)),
            "Y" => Ok(DistColumn::Y(i)),
            _ => Err(bad()),
        }
    }
}

/// Distributions of batch `k` as a table over `j`. A `meanY` request yields
/// a separate table with columns `i` and `mean`.
pub fn distribution_table(k: u32, columns: &[DistColumn]) -> Result<Table> {
    if columns.contains(&DistColumn::MeanY) {
        if columns.len() != 1 {
            return Err(Error::Config("meanY cannot be combined with other columns".into()));
        }
        let mut table = Table::new(["i", "mean"]);
        for i in 1..=batch_size(k) {
            let t = DistTable::y(k, i)?;
            table.push(vec![i.to_string(), fmt_f64(to_f64(&t.mean()))])?;
        }
        return Ok(table);
    }
    let dists = columns
        .iter()
        .map(|c| match *c {
            DistColumn::X(i) => DistTable::x(k, i),
            DistColumn::Y(i) => DistTable::y(k, i),
            DistColumn::MeanY => unreachable!(),
        })
        .collect::<Result<Vec<_>>>()?;
    let names = columns.iter().map(|c| match c {
        DistColumn::X(i) => format!("X{i}"),
        DistColumn::Y(i) => format!("Y{i}"),
        DistColumn::MeanY => unreachable!(),
    });
    let mut table = Table::new(std::iter::once("j".to_string()).chain(names));
    for j in 0..1u64 << k {
        let mut row = vec![j.to_string()];
        row.extend(dists.iter().map(|d| fmt_f64(to_f64(&d.get(j)))));
        table.push(row)?;
    }
    Ok(table)
}

/// Normalized bounds: `log(n!)`, the numeric upper bound, `-c(x_n)` and the
/// worst case.
pub fn bound_table(sizes: &[u64]) -> Result<Table> {
    let mut upper = NumericUpperBound::new();
    let mut table = Table::new([
        "num_elements",
        "log_factorial",
        "numeric_upper",
        "minus_c_xn",
        "worst_case",
    ]);
    for &n in sizes {
        if n == 0 {
            return Err(Error::Config("input sizes must be at least 1".into()));
        }
        table.push(vec![
            n.to_string(),
            fmt_f64(normalized(lower_bound_log_factorial(n).value, n)),
            fmt_f64(normalized(upper.f(n)?, n)),
            fmt_f64(-c_of_x(x_n(n))?.value),
            fmt_f64(normalized(worst_case_w(n)?.value, n)),
        ])?;
    }
    Ok(table)
}
