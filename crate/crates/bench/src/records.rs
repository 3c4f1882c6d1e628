//! Report records: JSON Lines (canonical) and a fixed-column CSV projection.
//!
//! Every line carries `schema` and `record` (`trial` or `aggregate`), so
//! reports from several runs can be appended to one file and read back
//! together.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use fairkc::report::{Algorithm, RunReport};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub schema: u32,
    pub trial: usize,
    pub seed: Option<u64>,
    pub instance: String,
    #[serde(flatten)]
    pub report: RunReport,
}

/// Per `(algo, n, k, t)` summary of trial records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRecord {
    pub schema: u32,
    pub algo: Algorithm,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub trials: usize,
    pub completed: usize,
    pub distortion_max: Option<f64>,
    pub distortion_mean: Option<f64>,
    pub queries_distinct_max: usize,
    pub queries_distinct_mean: f64,
    pub measured_c_max: f64,
    pub budget_bound: f64,
    pub bound_satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Record {
    Trial(TrialRecord),
    Aggregate(AggregateRecord),
}

/// Groups trials by `(algo, n, k, t)` in key order. A group's bound holds
/// when every trial completed within its query budget and, where an
/// optimum is known, its distortion bound.
pub fn aggregate<'a>(
    trials: impl IntoIterator<Item = &'a TrialRecord>,
    c: f64,
) -> Vec<AggregateRecord> {
    let mut groups: BTreeMap<(&str, usize, usize, usize), Vec<&RunReport>> = BTreeMap::new();
    for t in trials {
        let r = &t.report;
        groups
            .entry((r.algo.name(), r.n, r.k, r.t))
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .map(|rs| {
            let first = rs[0];
            let dist: Vec<f64> = rs.iter().filter_map(|r| r.distortion).collect();
            let q: Vec<usize> = rs.iter().map(|r| r.queries_distinct).collect();
            AggregateRecord {
                schema: SCHEMA_VERSION,
                algo: first.algo,
                n: first.n,
                k: first.k,
                t: first.t,
                trials: rs.len(),
                completed: rs.iter().filter(|r| r.completed()).count(),
                distortion_max: dist.iter().copied().reduce(f64::max),
                distortion_mean: (!dist.is_empty())
                    .then(|| dist.iter().sum::<f64>() / dist.len() as f64),
                queries_distinct_max: q.iter().copied().max().unwrap_or(0),
                queries_distinct_mean: q.iter().sum::<usize>() as f64 / q.len() as f64,
                measured_c_max: rs.iter().map(|r| r.measured_c).fold(0.0, f64::max),
                budget_bound: first.algo.query_bound(first.k, c),
                bound_satisfied: rs.iter().all(|r| trial_passes(r, c)),
            }
        })
        .collect()
}

pub fn trial_passes(r: &RunReport, c: f64) -> bool {
    r.completed() && r.within_query_bound(c) && r.within_distortion_bound() != Some(false)
}

/// Flat CSV row; columns that do not apply to a record are left empty.
#[derive(Debug, Default, Serialize)]
pub struct CsvRow {
    pub record: &'static str,
    pub schema: u32,
    pub trial: Option<usize>,
    pub seed: Option<u64>,
    pub instance: Option<String>,
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub achieved_cost: Option<f64>,
    pub opt_cost: Option<f64>,
    pub distortion: Option<f64>,
    pub queries_distinct: Option<usize>,
    pub queries_calls: Option<u64>,
    pub chosen_ell: Option<usize>,
    pub lambda_at_ell: Option<f64>,
    pub measured_c: Option<f64>,
    pub predicate_evaluations: Option<usize>,
    pub find_lambda_calls: Option<usize>,
    pub solve_ms: Option<f64>,
    pub verify_ms: Option<f64>,
    pub committee: Option<String>,
    pub error: Option<String>,
    pub trials: Option<usize>,
    pub completed: Option<usize>,
    pub distortion_max: Option<f64>,
    pub distortion_mean: Option<f64>,
    pub queries_distinct_max: Option<usize>,
    pub queries_distinct_mean: Option<f64>,
    pub measured_c_max: Option<f64>,
    pub budget_bound: Option<f64>,
    pub bound_satisfied: Option<bool>,
}

impl From<&Record> for CsvRow {
    fn from(rec: &Record) -> Self {
        match rec {
            Record::Trial(t) => {
                let r = &t.report;
                CsvRow {
                    record: "trial",
                    schema: t.schema,
                    trial: Some(t.trial),
                    seed: t.seed,
                    instance: Some(t.instance.clone()),
                    algo: r.algo.name().into(),
                    n: r.n,
                    k: r.k,
                    t: r.t,
                    achieved_cost: r.achieved_cost,
                    opt_cost: r.opt_cost,
                    distortion: r.distortion,
                    queries_distinct: Some(r.queries_distinct),
                    queries_calls: Some(r.queries_calls),
                    chosen_ell: r.chosen_ell,
                    lambda_at_ell: r.lambda_at_ell,
                    measured_c: Some(r.measured_c),
                    predicate_evaluations: r.predicate_evaluations,
                    find_lambda_calls: r.find_lambda_calls,
                    solve_ms: Some(r.timings.solve_ms),
                    verify_ms: r.timings.verify_ms,
                    committee: r.committee.as_ref().map(|c| {
                        c.members()
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    }),
                    error: r.error.clone(),
                    ..CsvRow::default()
                }
            }
            Record::Aggregate(a) => CsvRow {
                record: "aggregate",
                schema: a.schema,
                algo: a.algo.name().into(),
                n: a.n,
                k: a.k,
                t: a.t,
                trials: Some(a.trials),
                completed: Some(a.completed),
                distortion_max: a.distortion_max,
                distortion_mean: a.distortion_mean,
                queries_distinct_max: Some(a.queries_distinct_max),
                queries_distinct_mean: Some(a.queries_distinct_mean),
                measured_c_max: Some(a.measured_c_max),
                budget_bound: Some(a.budget_bound),
                bound_satisfied: Some(a.bound_satisfied),
                ..CsvRow::default()
            },
        }
    }
}

/// Columns of the `report` summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub algo: Algorithm,
    pub distortion_max: Option<f64>,
    pub queries_distinct_max: usize,
    pub budget_bound: f64,
    pub bound_satisfied: bool,
}

impl From<&AggregateRecord> for SummaryRow {
    fn from(a: &AggregateRecord) -> Self {
        Self {
            n: a.n,
            k: a.k,
            t: a.t,
            algo: a.algo,
            distortion_max: a.distortion_max,
            queries_distinct_max: a.queries_distinct_max,
            budget_bound: a.budget_bound,
            bound_satisfied: a.bound_satisfied,
        }
    }
}

pub const SUMMARY_HEADER: [&str; 8] = [
    "n",
    "k",
    "t",
    "algo",
    "distortion_max",
    "queries_distinct_max",
    "budget_bound",
    "bound_satisfied",
];

/// Appends records to `path`, or writes them to stdout when `path` is
/// `None`. CSV output gets a header only when the file is new or empty.
pub fn write_records(records: &[Record], path: Option<&Path>, format: Format) -> Result<()> {
    let (sink, fresh): (Box<dyn Write>, bool) = match path {
        Some(p) => {
            let fresh = std::fs::metadata(p).map_or(true, |m| m.len() == 0);
            let f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .with_context(|| format!("opening {}", p.display()))?;
            (Box::new(f), fresh)
        }
        None => (Box::new(std::io::stdout().lock()), true),
    };
    match format {
        Format::Json => {
            let mut w = std::io::BufWriter::new(sink);
            for r in records {
                serde_json::to_writer(&mut w, r)?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(fresh)
                .from_writer(sink);
            for r in records {
                w.serialize(CsvRow::from(r))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Reads every record from a JSON Lines report. Blank lines are skipped.
pub fn read_records(path: &Path) -> Result<Vec<Record>> {
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}: not a report record", path.display(), i + 1))?;
        let schema = match &rec {
            Record::Trial(t) => t.schema,
            Record::Aggregate(a) => a.schema,
        };
        if schema != SCHEMA_VERSION {
            bail!("{}:{}: unsupported schema {schema}", path.display(), i + 1);
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn write_summary(rows: &[SummaryRow], path: Option<&Path>, format: Format) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => {
            Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        Format::Json => {
            let mut w = std::io::BufWriter::new(sink);
            serde_json::to_writer_pretty(&mut w, rows)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(sink);
            w.write_record(SUMMARY_HEADER)?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
