//! Exhaustive ground truth for small instances. Reads the metric directly
//! and never touches a query ledger.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::OrderedCover;
use crate::instance::{Committee, FairInstance, ReducedCommittee, ReducedInstance};
use crate::metric::MetricSpace;
use crate::PointId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceLimits {
    pub max_n: usize,
    pub max_k: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        Self {
            max_n: 16,
            max_k: 5,
        }
    }
}

impl BruteForceLimits {
    pub fn admits(&self, n: usize, k: usize) -> bool {
        n <= self.max_n && k <= self.max_k
    }

    fn check(&self, n: usize, k: usize) -> Result<()> {
        if self.admits(n, k) {
            Ok(())
        } else {
            Err(Error::BruteForceTooLarge {
                n,
                k,
                max_n: self.max_n,
                max_k: self.max_k,
            })
        }
    }
}

/// All optimal committees with their induced partitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalCertificate {
    pub opt_cost: f64,
    pub all_optima: Vec<Committee>,
    /// `partitions[j][u]`: the member of `all_optima[j]` serving `u`.
    pub partitions: Vec<Vec<PointId>>,
}

/// Assigns each point to its nearest center, lowest center id on ties.
pub fn induced_partition(centers: &[PointId], m: &MetricSpace) -> Vec<PointId> {
    let mut sorted = centers.to_vec();
    sorted.sort_unstable();
    (0..m.len())
        .map(|u| {
            let mut best = sorted[0];
            for &c in &sorted[1..] {
                if m.dist(u, c) < m.dist(u, best) {
                    best = c;
                }
            }
            best
        })
        .collect()
}

fn cost_of(centers: &[PointId], m: &MetricSpace) -> f64 {
    (0..m.len())
        .map(|u| {
            centers
                .iter()
                .map(|&c| m.dist(u, c))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Enumerates every size-`k` subset of `U`.
pub fn opt_fair_kcenter(
    inst: &FairInstance,
    limits: BruteForceLimits,
) -> Result<OptimalCertificate> {
    let (n, k) = (inst.n(), inst.k());
    limits.check(n, k)?;
    let m = inst.metric();
    let mut best = f64::INFINITY;
    let mut optima: Vec<Vec<PointId>> = Vec::new();
    let mut subset: Vec<PointId> = Vec::with_capacity(k);
    let mut visit = |s: &[PointId]| {
        let mut counts = vec![0; inst.groups().len()];
        for &p in s {
            counts[inst.group_of(p)] += 1;
        }
        if counts.iter().zip(inst.requirements()).any(|(c, a)| c < a) {
            return;
        }
        let c = cost_of(s, m);
        if c < best {
            best = c;
            optima.clear();
        }
        if c == best {
            optima.push(s.to_vec());
        }
    };
    combinations(n, k, 0, &mut subset, &mut visit);
    if optima.is_empty() {
        return Err(Error::InfeasibleCommittee("no feasible committee".into()));
    }
    let partitions = optima.iter().map(|s| induced_partition(s, m)).collect();
    Ok(OptimalCertificate {
        opt_cost: best,
        all_optima: optima.into_iter().map(Committee::new).collect(),
        partitions,
    })
}

fn combinations(
    n: usize,
    k: usize,
    from: usize,
    subset: &mut Vec<PointId>,
    visit: &mut impl FnMut(&[PointId]),
) {
    if subset.len() == k {
        visit(subset);
        return;
    }
    let need = k - subset.len();
    for p in from..=(n - need) {
        subset.push(p);
        combinations(n, k, p + 1, subset, visit);
        subset.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedOptimum {
    pub opt_cost: f64,
    pub optima: Vec<ReducedCommittee>,
}

/// Enumerates one pick per reduced group; the cost is measured over the
/// base points.
pub fn opt_reduced(r: &ReducedInstance<'_>, limits: BruteForceLimits) -> Result<ReducedOptimum> {
    let m = r.metric();
    limits.check(m.len(), r.k())?;
    let mut state = ReducedSearch {
        r,
        m,
        picks: Vec::with_capacity(r.k()),
        best: f64::INFINITY,
        optima: Vec::new(),
    };
    let start = vec![f64::INFINITY; m.len()];
    state.descend(&start);
    Ok(ReducedOptimum {
        opt_cost: state.best,
        optima: state.optima,
    })
}

struct ReducedSearch<'r, 'a> {
    r: &'r ReducedInstance<'a>,
    m: &'a MetricSpace,
    picks: Vec<PointId>,
    best: f64,
    optima: Vec<ReducedCommittee>,
}

impl ReducedSearch<'_, '_> {
    fn descend(&mut self, nearest: &[f64]) {
        let j = self.picks.len();
        if j == self.r.k() {
            let c = nearest.iter().copied().fold(0.0, f64::max);
            if c < self.best {
                self.best = c;
                self.optima.clear();
            }
            if c == self.best {
                self.optima.push(ReducedCommittee {
                    picks: self.picks.clone(),
                });
            }
            return;
        }
        for &p in self.r.members(j) {
            let next: Vec<f64> = nearest
                .iter()
                .enumerate()
                .map(|(u, &d)| d.min(self.m.dist(u, p)))
                .collect();
            self.picks.push(p);
            self.descend(&next);
            self.picks.pop();
        }
    }
}

/// Largest `ℓ` such that `T_ℓ` puts at most one center in each part.
pub fn critical_index(cover: &OrderedCover, partition: &[PointId]) -> usize {
    let mut seen = Vec::new();
    for (i, &t) in cover.centers.iter().enumerate() {
        let part = partition[t];
        if seen.contains(&part) {
            return i;
        }
        seen.push(part);
    }
    cover.centers.len()
}

/// Whether `cover` is a progressive `γ`-cover with respect to some listed
/// optimum. `slack` is the relative float allowance on the cost bound.
pub fn is_progressive_cover(
    cover: &OrderedCover,
    cert: &OptimalCertificate,
    m: &MetricSpace,
    gamma: f64,
    slack: f64,
) -> bool {
    cert.partitions.iter().any(|part| {
        let ell = critical_index(cover, part);
        cost_of(cover.prefix(ell), m) <= (gamma + slack) * cert.opt_cost
    })
}

/// `d(s, G)` from ground truth.
pub fn dist_to_group(s: PointId, group: &[PointId], m: &MetricSpace) -> f64 {
    group
        .iter()
        .map(|&g| m.dist(s, g))
        .fold(f64::INFINITY, f64::min)
}

/// Largest prefix length [`lambda_bruteforce`] will handle.
pub const MAX_HALL_CENTERS: usize = 20;

/// Smallest value `d(s, G)` whose threshold graph satisfies Hall's condition
/// for every subset of `prefix`.
pub fn lambda_bruteforce(
    prefix: &[PointId],
    groups: &[Vec<PointId>],
    m: &MetricSpace,
) -> Result<f64> {
    let ell = prefix.len();
    if ell == 0 || ell > MAX_HALL_CENTERS || ell > groups.len() || groups.len() > 64 {
        return Err(Error::InvalidPrefix {
            ell,
            k: groups.len(),
        });
    }
    let values: Vec<Vec<f64>> = prefix
        .iter()
        .map(|&s| groups.iter().map(|g| dist_to_group(s, g, m)).collect())
        .collect();
    let mut candidates: Vec<f64> = values.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    for lambda in candidates {
        let nbrs: Vec<u64> = values
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &d)| d <= lambda)
                    .fold(0u64, |acc, (g, _)| acc | (1 << g))
            })
            .collect();
        if satisfies_hall(&nbrs) {
            return Ok(lambda);
        }
    }
    Err(Error::NoFeasibleLambda)
}

/// Hall's condition over all nonempty subsets of the left side.
pub fn satisfies_hall(nbrs: &[u64]) -> bool {
    (1u32..(1 << nbrs.len())).all(|set| {
        let union = nbrs
            .iter()
            .enumerate()
            .filter(|(i, _)| set >> i & 1 == 1)
            .fold(0u64, |acc, (_, &b)| acc | b);
        union.count_ones() >= set.count_ones()
    })
}

/// Maximum matching size by trying every assignment; left vertices are
/// rows of neighbor bitmasks.
pub fn max_matching_bruteforce(nbrs: &[u64]) -> usize {
    fn go(nbrs: &[u64], used: u64) -> usize {
        let Some((&first, rest)) = nbrs.split_first() else {
            return 0;
        };
        let mut best = go(rest, used);
        let mut free = first & !used;
        while free != 0 && best < nbrs.len() {
            let bit = free & free.wrapping_neg();
            best = best.max(1 + go(rest, used | bit));
            free &= free - 1;
        }
        best
    }
    go(nbrs, 0)
}
