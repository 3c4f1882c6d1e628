use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fairkc::brute::BruteForceLimits;
use fairkc::io::write_instance;
use fairkc::metric::MetricKind;
use fairkc::report::Algorithm;
use fairkc_bench::experiment::{gen_paths, run_trials, InstanceSpec, RunConfig, Source};
use fairkc_bench::records::{
    aggregate, read_records, trial_passes, write_records, write_summary, Format, Record, SummaryRow,
};

#[derive(Parser)]
#[command(
    name = "fairkc",
    version,
    about = "Ordinal fair k-center solvers and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write generated instances as JSON.
    Gen(GenArgs),
    /// Run solvers and emit per-trial and aggregate records.
    Run(RunArgs),
    /// Summarize JSON Lines reports per (algo, n, k, t).
    Report(ReportArgs),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, default_value = "euclidean-uniform", value_parser = parse_kind)]
    kind: MetricKind,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Number of groups.
    #[arg(long, default_value_t = 2)]
    groups: usize,
    /// Per-group minimums, comma separated; defaults to an even split of k.
    #[arg(long, value_delimiter = ',')]
    requirements: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Base seed; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InstanceArgs {
    fn recipe(&self) -> InstanceSpec {
        InstanceSpec {
            kind: self.kind,
            n: self.n,
            k: self.k,
            groups: self.groups,
            requirements: self.requirements.clone(),
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Output file, or a directory when --trials > 1.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Solvers to run, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "three,five", value_parser = parse_algo)]
    algo: Vec<Algorithm>,
    /// Instance files; when absent, instances are generated from the flags.
    #[arg(long, num_args = 1..)]
    input: Vec<PathBuf>,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Cap on distinct queried pairs per run.
    #[arg(long)]
    budget: Option<usize>,
    /// Compute the exact optimum when the instance fits the limits.
    #[arg(long, overrides_with = "no_verify", default_value_t = true)]
    verify: bool,
    #[arg(long = "no-verify")]
    no_verify: bool,
    #[arg(long, default_value_t = BruteForceLimits::default().max_n)]
    verify_max_n: usize,
    #[arg(long, default_value_t = BruteForceLimits::default().max_k)]
    verify_max_k: usize,
    /// Constant C in the five-solver budget C·k·(⌈log₂k⌉+1)².
    #[arg(long, default_value_t = 8.0)]
    c: f64,
    /// Report file to append to; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON Lines reports written by `run`.
    inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 8.0)]
    c: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn parse_kind(s: &str) -> Result<MetricKind, String> {
    s.parse().map_err(|e: fairkc::Error| e.to_string())
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: fairkc::Error| e.to_string())
}

fn gen(args: GenArgs) -> Result<bool> {
    let recipe = args.instance.recipe();
    let paths = gen_paths(&args.out, args.instance.trials, args.instance.seed)?;
    for (i, path) in paths.iter().enumerate() {
        let file = recipe.build(args.instance.seed + i as u64)?;
        write_instance(path, &file).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(true)
}

fn run(args: RunArgs) -> Result<bool> {
    let source = if args.input.is_empty() {
        Source::Generated {
            recipe: args.instance.recipe(),
            trials: args.instance.trials,
            seed: args.instance.seed,
        }
    } else {
        Source::Files(args.input.clone())
    };
    let verify = (args.verify && !args.no_verify).then_some(BruteForceLimits {
        max_n: args.verify_max_n,
        max_k: args.verify_max_k,
    });
    let config = RunConfig {
        algos: args.algo.clone(),
        budget: args.budget,
        verify,
    };
    let trials = run_trials(&source, &config)?;
    let ok = trials.iter().all(|t| trial_passes(&t.report, args.c));
    for t in trials.iter().filter(|t| !trial_passes(&t.report, args.c)) {
        let why = t
            .report
            .error
            .clone()
            .unwrap_or_else(|| "bound check failed".into());
        eprintln!(
            "trial {} ({}, {}): {why}",
            t.trial, t.instance, t.report.algo
        );
    }
    let aggregates = aggregate(&trials, args.c);
    let mut records: Vec<Record> = trials.into_iter().map(Record::Trial).collect();
    records.extend(aggregates.into_iter().map(Record::Aggregate));
    write_records(&records, args.out.as_deref(), args.format)?;
    Ok(ok)
}

fn report(args: ReportArgs) -> Result<bool> {
    let mut trials = Vec::new();
    for path in &args.inputs {
        for rec in read_records(path)? {
            if let Record::Trial(t) = rec {
                trials.push(t);
            }
        }
    }
    let rows: Vec<SummaryRow> = aggregate(&trials, args.c)
        .iter()
        .map(SummaryRow::from)
        .collect();
    write_summary(&rows, args.out.as_deref(), args.format)?;
    Ok(rows.iter().all(|r| r.bound_satisfied))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Report(a) => report(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
