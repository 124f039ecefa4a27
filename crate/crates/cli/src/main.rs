//! Command line front end: sorting with comparison counts, sampling
//! experiments, exact averages, distributions and bounds as TSV tables.

use std::io::{self, BufRead, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use merge_insertion::harness::{
    bound_table, compare_algorithms, distribution_table, emit_tsv, exact_table, log_spaced,
    run_experiment, stats_table, sweep_factor, write_tsv, DistColumn, ExperimentConfig, Table,
    GENERATOR,
};
use merge_insertion::{Algorithm, Execution, Schedule, Sorter, Strategy};

#[derive(Parser, Debug)]
#[command(name = "merge-insertion", version, about = "MergeInsertion sorting and average-case analysis")]
struct Cli {
    /// Seed for the input generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trials per size (default: max(10, min(10000, 10^7/n))).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Binary insertion strategy: left, right, center-left, center-right.
    #[arg(long, global = true, default_value = "left")]
    strategy: Strategy,
    /// Batch boundary factor, e.g. 1.03 or 103/100.
    #[arg(long, global = true, default_value = "1")]
    factor: Schedule,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run trials on the current thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sort newline-separated integers and report the comparison count.
    Sort {
        /// Input file (default: stdin).
        input: Option<PathBuf>,
        #[arg(long, default_value = "mi")]
        algorithm: Algorithm,
    },
    /// Average comparison counts over random (or all) permutations.
    Count {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, default_value = "mi")]
        algorithm: Algorithm,
        /// Sample even for n <= 8 instead of enumerating all inputs.
        #[arg(long)]
        no_exhaustive: bool,
    },
    /// Exact average comparison count of MergeInsertion.
    Exact {
        #[command(flatten)]
        sizes: Sizes,
    },
    /// Distributions of insertion positions within batch k.
    Dist {
        #[arg(short, long)]
        k: u32,
        /// Columns such as X1, Y21, or meanY.
        #[arg(required = true)]
        columns: Vec<DistColumn>,
    },
    /// Lower, numeric upper and worst-case bounds, normalized.
    Bound {
        #[command(flatten)]
        sizes: Sizes,
    },
    /// Normalized MergeInsertion means for several boundary factors.
    SweepFactor {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, value_delimiter = ',', default_value = "1,1.01,1.02,1.03,1.04,1.05")]
        factors: Vec<Schedule>,
    },
    /// MergeInsertion against the combined algorithm.
    CompareAlgos {
        #[command(flatten)]
        sizes: Sizes,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Sizes {
    /// Comma-separated input sizes.
    #[arg(long, value_delimiter = ',')]
    n: Vec<u64>,
    /// Log-spaced sizes FROM:TO:COUNT.
    #[arg(long, value_name = "FROM:TO:COUNT")]
    range: Option<String>,
    /// All sizes 1..=MAX.
    #[arg(long)]
    max: Option<u64>,
}

impl Sizes {
    fn resolve(&self) -> Result<Vec<u64>> {
        if let Some(max) = self.max {
            if max == 0 {
                bail!("--max must be at least 1");
            }
            return Ok((1..=max).collect());
        }
        if let Some(spec) = &self.range {
            let parts: Vec<&str> = spec.split(':').collect();
            let [from, to, count] = parts[..] else {
                bail!("--range expects FROM:TO:COUNT, got '{spec}'");
            };
            let parse = |s: &str| s.parse::<u64>().with_context(|| format!("bad number '{s}' in --range"));
            return Ok(log_spaced(parse(from)?, parse(to)?, parse(count)? as usize)?);
        }
        if self.n.contains(&0) {
            bail!("input sizes must be at least 1");
        }
        Ok(self.n.clone())
    }
}

impl Cli {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn emit(&self, table: &Table) -> Result<()> {
        match &self.out {
            Some(path) => {
                let bytes = emit_tsv(table, path)?;
                eprintln!("wrote {bytes} bytes to {}", path.display());
            }
            None => {
                write_tsv(table, io::stdout().lock()).context("writing to stdout")?;
            }
        }
        Ok(())
    }

    fn metadata(&self, extra: &str) {
        eprintln!(
            "# generator: {GENERATOR}; seed: {}; strategy: {}; factor: {}; trials: {}{extra}",
            self.seed,
            self.strategy,
            self.factor,
            self.trials.map_or("default".to_string(), |t| t.to_string()),
        );
    }
}

fn read_keys(input: Option<&PathBuf>) -> Result<Vec<i64>> {
    let mut text = String::new();
    match input {
        Some(path) => {
            text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?
        }
        None => {
            io::stdin().lock().read_to_string(&mut text).context("reading stdin")?;
        }
    }
    text.as_bytes()
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Ok(l) if l.trim().is_empty() => None,
            Ok(l) => Some(
                l.trim()
                    .parse::<i64>()
                    .with_context(|| format!("line {}: '{}' is not an integer", i + 1, l.trim())),
            ),
            Err(e) => Some(Err(e.into())),
        })
        .collect()
}

fn sort(cli: &Cli, input: Option<&PathBuf>, algorithm: Algorithm) -> Result<()> {
    let keys = read_keys(input)?;
    let sorter = Sorter::new(cli.strategy, cli.factor);
    let outcome = sorter.sort_by(algorithm, &keys, i64::cmp)?;
    let mut text = String::with_capacity(keys.len() * 8);
    for v in &outcome.sorted {
        text.push_str(&v.to_string());
        text.push('\n');
    }
    match &cli.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut out = BufWriter::new(io::stdout().lock());
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    eprintln!("comparisons\t{}", outcome.comparisons);
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Sort { input, algorithm } => sort(cli, input.as_ref(), *algorithm),
        Command::Count { sizes, algorithm, no_exhaustive } => {
            let cfg = ExperimentConfig {
                sizes: sizes.resolve()?,
                algorithm: *algorithm,
                strategy: cli.strategy,
                schedule: cli.factor,
                trials: cli.trials,
                seed: cli.seed,
                exhaustive: !no_exhaustive,
                execution: cli.execution(),
            };
            cli.metadata(&format!("; algorithm: {algorithm}; exhaustive: {}", !no_exhaustive));
            cli.emit(&stats_table(&run_experiment(&cfg)?))
        }
        Command::Exact { sizes } => cli.emit(&exact_table(&sizes.resolve()?, cli.strategy)?),
        Command::Dist { k, columns } => cli.emit(&distribution_table(*k, columns)?),
        Command::Bound { sizes } => cli.emit(&bound_table(&sizes.resolve()?)?),
        Command::SweepFactor { sizes, factors } => {
            cli.metadata("; algorithm: mi");
            let table = sweep_factor(
                &sizes.resolve()?,
                factors,
                cli.strategy,
                cli.trials,
                cli.seed,
                cli.execution(),
            )?;
            cli.emit(&table)
        }
        Command::CompareAlgos { sizes } => {
            cli.metadata("");
            let table =
                compare_algorithms(&sizes.resolve()?, cli.strategy, cli.trials, cli.seed, cli.execution())?;
            cli.emit(&table)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
