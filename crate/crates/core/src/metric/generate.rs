//! Seeded instance generators.
//!
//! Every generator draws from a ChaCha8 stream seeded with the config's
//! 64-bit seed, so identical configs give bit-identical metrics on every
//! platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::PointId;

/// Largest `n` for the default doubling line, whose positions `2^i - 1` stay
/// exactly representable.
pub const MAX_DEFAULT_LINE_POINTS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    EuclideanUniform,
    EuclideanClustered,
    RandomMetricClosure,
    Line,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::EuclideanUniform,
        MetricKind::EuclideanClustered,
        MetricKind::RandomMetricClosure,
        MetricKind::Line,
    ];

    pub fn is_euclidean(self) -> bool {
        !matches!(self, MetricKind::RandomMetricClosure)
    }

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::EuclideanUniform => "euclidean-uniform",
            MetricKind::EuclideanClustered => "euclidean-clustered",
            MetricKind::RandomMetricClosure => "random-metric-closure",
            MetricKind::Line => "line",
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown metric kind `{s}`")))
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub kind: MetricKind,
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub cluster_count: usize,
    pub spread: f64,
    /// Explicit positions for the line kind; when absent the line uses
    /// `0, 1, 3, 7, ..., 2^i - 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<f64>>,
}

impl GeneratorConfig {
    pub fn new(kind: MetricKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            dim: 2,
            seed,
            cluster_count: 4,
            spread: 5.0,
            positions: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        match self.kind {
            MetricKind::EuclideanUniform | MetricKind::EuclideanClustered if self.dim == 0 => {
                bad("dim must be at least 1 for Euclidean kinds".into())
            }
            MetricKind::EuclideanClustered if self.cluster_count == 0 => {
                bad("cluster_count must be at least 1".into())
            }
            MetricKind::EuclideanClustered if !(self.spread.is_finite() && self.spread >= 0.0) => {
                bad(format!("spread must be finite and nonnegative, got {}", self.spread))
            }
            MetricKind::Line => match &self.positions {
                Some(p) if p.len() != self.n => {
                    bad(format!("{} positions given for n = {}", p.len(), self.n))
                }
                None if self.n > MAX_DEFAULT_LINE_POINTS => bad(format!(
                    "the default line supports n <= {MAX_DEFAULT_LINE_POINTS}; pass explicit positions"
                )),
                _ => Ok(()),
            },
            _ => Ok(()),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub metric: MetricSpace,
    /// Coordinates for the Euclidean and line kinds.
    pub coords: Option<Vec<Vec<f64>>>,
}

#[allow(clippy::needless_range_loop)]
pub fn generate(config: &GeneratorConfig) -> Result<Generated> {
    config.validate()?;
    let mut rng = config.rng();
    let n = config.n;
    match config.kind {
        MetricKind::EuclideanUniform => {
            let coords: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..config.dim).map(|_| rng.gen_range(0.0..100.0)).collect())
                .collect();
            euclidean(coords)
        }
        MetricKind::EuclideanClustered => {
            let centers: Vec<Vec<f64>> = (0..config.cluster_count)
                .map(|_| (0..config.dim).map(|_| rng.gen_range(0.0..100.0)).collect())
                .collect();
            let coords: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    let c = &centers[rng.gen_range(0..centers.len())];
                    c.iter()
                        .map(|&x| {
                            if config.spread > 0.0 {
                                x + rng.gen_range(-config.spread..config.spread)
                            } else {
                                x
                            }
                        })
                        .collect()
                })
                .collect();
            euclidean(coords)
        }
        MetricKind::RandomMetricClosure => {
            let mut table = vec![vec![0.0; n]; n];
            for u in 0..n {
                for v in (u + 1)..n {
                    let w = rng.gen_range(1.0..100.0);
                    table[u][v] = w;
                    table[v][u] = w;
                }
            }
            shortest_path_closure(&mut table);
            Ok(Generated {
                metric: MetricSpace::from_table(&table)?,
                coords: None,
            })
        }
        MetricKind::Line => {
            let positions = config
                .positions
                .clone()
                .unwrap_or_else(|| (0..n).map(|i| ((1u64 << i) - 1) as f64).collect());
            euclidean(positions.into_iter().map(|x| vec![x]).collect())
        }
    }
}

fn euclidean(coords: Vec<Vec<f64>>) -> Result<Generated> {
    Ok(Generated {
        metric: MetricSpace::from_points(&coords)?,
        coords: Some(coords),
    })
}

/// Replaces a symmetric weight table with its all-pairs shortest-path
/// distances (Floyd-Warshall).
#[allow(clippy::needless_range_loop)]
pub fn shortest_path_closure(table: &mut [Vec<f64>]) {
    let n = table.len();
    for via in 0..n {
        for u in 0..n {
            let du = table[u][via];
            for v in 0..n {
                let alt = du + table[via][v];
                if alt < table[u][v] {
                    table[u][v] = alt;
                }
            }
        }
    }
}

/// A generated metric with `t` balanced groups and the given requirements
/// (an even split of `k` when absent). Groups draw from their own stream
/// derived from the config seed.
pub fn generate_instance(
    config: &GeneratorConfig,
    k: usize,
    t: usize,
    requirements: Option<Vec<usize>>,
) -> Result<(crate::FairInstance, Generated)> {
    if t == 0 || t > config.n {
        return Err(Error::InvalidConfig(format!(
            "group count must be in 1..={}, got {t}",
            config.n
        )));
    }
    let g = generate(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ GROUP_STREAM);
    let groups = balanced_groups(config.n, t, &mut rng);
    let requirements = requirements.unwrap_or_else(|| default_requirements(&groups, k));
    let inst = crate::FairInstance::new(g.metric.clone(), k, groups, requirements)?;
    Ok((inst, g))
}

const GROUP_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// Partitions `0..n` into `t` groups whose sizes differ by at most one,
/// assigning points round-robin over a seeded shuffle. Member lists are
/// sorted and groups are ordered by their smallest member.
pub fn balanced_groups<R: Rng>(n: usize, t: usize, rng: &mut R) -> Vec<Vec<PointId>> {
    let mut order: Vec<PointId> = (0..n).collect();
    order.shuffle(rng);
    let mut groups = vec![Vec::new(); t];
    for (i, p) in order.into_iter().enumerate() {
        groups[i % t].push(p);
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort_unstable_by_key(|g| g.first().copied());
    groups
}

/// Splits `k` as evenly as possible over the groups, capping each share at
/// the group's size.
pub fn default_requirements(groups: &[Vec<PointId>], k: usize) -> Vec<usize> {
    let t = groups.len();
    if t == 0 {
        return Vec::new();
    }
    groups
        .iter()
        .enumerate()
        .map(|(i, g)| (k / t + usize::from(i < k % t)).min(g.len()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_line_is_the_doubling_fixture() {
        let g = generate(&GeneratorConfig::new(MetricKind::Line, 4, 0)).unwrap();
        let want = MetricSpace::from_line(&[0.0, 1.0, 3.0, 7.0]).unwrap();
        assert_eq!(g.metric, want);
    }

    #[test]
    fn explicit_line_positions() {
        let mut cfg = GeneratorConfig::new(MetricKind::Line, 3, 0);
        cfg.positions = Some(vec![0.0, 1.0, 3.0]);
        let g = generate(&cfg).unwrap();
        assert_eq!(g.metric.dist(0, 2), 3.0);
        cfg.positions = Some(vec![0.0]);
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn same_seed_same_table() {
        for kind in MetricKind::ALL {
            let cfg = GeneratorConfig::new(kind, 15, 99);
            let a = generate(&cfg).unwrap();
            let b = generate(&cfg).unwrap();
            let bits = |m: &MetricSpace| {
                m.to_table()
                    .concat()
                    .into_iter()
                    .map(f64::to_bits)
                    .collect::<Vec<_>>()
            };
            assert_eq!(bits(&a.metric), bits(&b.metric), "{kind}");
        }
    }

    #[test]
    fn closure_is_a_metric() {
        let g = generate(&GeneratorConfig::new(
            MetricKind::RandomMetricClosure,
            20,
            5,
        ))
        .unwrap();
        assert!(g.metric.validate().is_empty());
        assert!(g.coords.is_none());
    }

    #[test]
    fn euclidean_kinds_are_metrics() {
        for kind in [MetricKind::EuclideanUniform, MetricKind::EuclideanClustered] {
            for seed in 0..5 {
                let mut cfg = GeneratorConfig::new(kind, 25, seed);
                cfg.dim = 1 + seed as usize % 3;
                let g = generate(&cfg).unwrap();
                assert!(g.metric.validate().is_empty());
                assert_eq!(g.coords.unwrap().len(), 25);
            }
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(generate(&GeneratorConfig::new(MetricKind::EuclideanUniform, 0, 1)).is_err());
        let mut cfg = GeneratorConfig::new(MetricKind::EuclideanUniform, 3, 1);
        cfg.dim = 0;
        assert!(generate(&cfg).is_err());
        assert!(generate(&GeneratorConfig::new(MetricKind::Line, 60, 1)).is_err());
    }

    #[test]
    fn groups_are_balanced_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let groups = balanced_groups(10, 4, &mut rng);
        let mut all: Vec<_> = groups.concat();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        let sizes: Vec<_> = groups.iter().map(Vec::len).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn requirements_split_and_cap() {
        let groups = vec![vec![0, 1, 2], vec![3], vec![4, 5]];
        assert_eq!(default_requirements(&groups, 5), vec![2, 1, 1]);
        assert_eq!(default_requirements(&groups, 2), vec![1, 1, 0]);
    }

    #[test]
    fn generated_instances_are_reproducible() {
        let cfg = GeneratorConfig::new(MetricKind::EuclideanUniform, 100, 4);
        let (a, _) = generate_instance(&cfg, 8, 4, None).unwrap();
        let (b, _) = generate_instance(&cfg, 8, 4, None).unwrap();
        assert_eq!(a.groups(), b.groups());
        assert_eq!(a.requirements(), &[2, 2, 2, 2]);
        assert!(a.groups().iter().all(|g| g.len() == 25));
        assert!(generate_instance(&cfg, 8, 0, None).is_err());
        assert!(generate_instance(&cfg, 8, 2, Some(vec![5, 5])).is_err());
    }

    #[test]
    fn parse_kind_names() {
        for kind in MetricKind::ALL {
            assert_eq!(kind.name().parse::<MetricKind>().unwrap(), kind);
        }
        assert!("sphere".parse::<MetricKind>().is_err());
    }
}
