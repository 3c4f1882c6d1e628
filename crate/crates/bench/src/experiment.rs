//! Instance sources and trial execution.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fairkc::brute::BruteForceLimits;
use fairkc::io::{read_instance, InstanceFile, InstanceMeta};
use fairkc::metric::{generate_instance, GeneratorConfig, MetricKind};
use fairkc::report::{run_algorithm, Algorithm};
use fairkc::FairInstance;
use rayon::prelude::*;

use crate::records::{TrialRecord, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub kind: MetricKind,
    pub n: usize,
    pub k: usize,
    pub groups: usize,
    pub requirements: Option<Vec<usize>>,
}

impl InstanceSpec {
    pub fn build(&self, seed: u64) -> Result<InstanceFile> {
        let cfg = GeneratorConfig::new(self.kind, self.n, seed);
        let (inst, g) = generate_instance(&cfg, self.k, self.groups, self.requirements.clone())
            .with_context(|| format!("generating {} instance with seed {seed}", self.kind))?;
        Ok(InstanceFile::from_instance(
            &inst,
            g.coords,
            Some(InstanceMeta {
                kind: self.kind,
                seed,
            }),
        ))
    }
}

pub enum Source {
    Files(Vec<PathBuf>),
    Generated {
        recipe: InstanceSpec,
        trials: usize,
        seed: u64,
    },
}

/// A labelled instance ready to run.
pub struct Loaded {
    pub label: String,
    pub seed: Option<u64>,
    pub instance: FairInstance,
}

impl Source {
    pub fn count(&self) -> usize {
        match self {
            Source::Files(f) => f.len(),
            Source::Generated { trials, .. } => *trials,
        }
    }

    pub fn load(&self, index: usize) -> Result<Loaded> {
        match self {
            Source::Files(files) => {
                let path = &files[index];
                let file = read_instance(path)?;
                Ok(Loaded {
                    label: path.display().to_string(),
                    seed: file.meta.as_ref().map(|m| m.seed),
                    instance: file.to_instance()?,
                })
            }
            Source::Generated { recipe, seed, .. } => {
                let s = seed + index as u64;
                Ok(Loaded {
                    label: format!("{}-n{}-k{}-seed{s}", recipe.kind, recipe.n, recipe.k),
                    seed: Some(s),
                    instance: recipe.build(s)?.to_instance()?,
                })
            }
        }
    }
}

pub struct RunConfig {
    pub algos: Vec<Algorithm>,
    pub budget: Option<usize>,
    pub verify: Option<BruteForceLimits>,
}

/// Runs every algorithm on every instance; trials run in parallel and come
/// back in `(trial, algo)` order. An instance that fails to load aborts the
/// run; solver failures are recorded per trial.
pub fn run_trials(source: &Source, config: &RunConfig) -> Result<Vec<TrialRecord>> {
    if source.count() == 0 {
        bail!("no instances to run");
    }
    let per_trial: Vec<Result<Vec<TrialRecord>>> = (0..source.count())
        .into_par_iter()
        .map(|i| {
            let loaded = source.load(i)?;
            Ok(config
                .algos
                .iter()
                .map(|&algo| TrialRecord {
                    schema: SCHEMA_VERSION,
                    trial: i,
                    seed: loaded.seed,
                    instance: loaded.label.clone(),
                    report: run_algorithm(algo, &loaded.instance, config.budget, config.verify),
                })
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for r in per_trial {
        out.extend(r?);
    }
    Ok(out)
}

/// Output paths for `count` generated instances: `out` itself for one,
/// otherwise `instance-<seed>.json` inside the directory `out`.
pub fn gen_paths(out: &Path, count: usize, seed: u64) -> Result<Vec<PathBuf>> {
    if count == 1 {
        return Ok(vec![out.to_path_buf()]);
    }
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    Ok((0..count)
        .map(|i| out.join(format!("instance-{}.json", seed + i as u64)))
        .collect())
}
