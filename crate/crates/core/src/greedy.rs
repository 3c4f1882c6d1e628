//! Farthest-first center sequences.
//!
//! Three ways to build the ordered sequence `T = (t_1, ..., t_k)`:
//!
//! * [`gonzalez_exact`] reads the metric directly. It is the reference
//!   used to isolate the matching pipeline in tests and baselines.
//! * [`ordinal_greedy_full`] reproduces farthest-first selection exactly
//!   with at most `(k^2 - k)/2` distinct queries. Each current center's
//!   cluster (points ranking that center first among `T`) and the cluster's
//!   farthest member are both read off the rankings for free, so one query
//!   per cluster suffices to find the globally farthest point.
//! * [`ordinal_greedy_lite`] spends at most `2k` distinct queries. It keeps
//!   an upper bound on every cluster radius and refreshes stale bounds
//!   lazily, stopping as soon as the chosen point is provably at least half
//!   as far from `T` as the farthest point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, OrdinalProfile, QueryOracle};
use crate::PointId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMode {
    Exact,
    OrdinalFull,
    OrdinalLite,
}

/// An ordered center sequence; `prefix(l)` is `T_l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedCover {
    pub centers: Vec<PointId>,
    pub mode: CoverMode,
    /// Fresh distinct pairs charged while building the sequence.
    pub queries_used: usize,
    /// Steps (1-based index of the center chosen) at which the lite scheme
    /// ran out of allowance before certifying the half-farthest property.
    pub uncertified_steps: Vec<usize>,
}

impl OrderedCover {
    pub fn k(&self) -> usize {
        self.centers.len()
    }

    pub fn prefix(&self, ell: usize) -> &[PointId] {
        &self.centers[..ell]
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::KExceedsN { k, n });
    }
    if k == 0 {
        return Err(Error::InvalidInstance("k must be at least 1".into()));
    }
    Ok(())
}

/// Classic farthest-first traversal on the true metric. `t_1 = 0`, then the
/// non-center point farthest from the chosen centers, lowest id on ties.
/// Charges nothing.
pub fn gonzalez_exact(m: &MetricSpace, k: usize) -> Result<OrderedCover> {
    let n = m.len();
    check_k(k, n)?;
    let mut centers = vec![0];
    let mut is_center = vec![false; n];
    is_center[0] = true;
    let mut near: Vec<f64> = m.row(0).to_vec();
    while centers.len() < k {
        let mut best: Option<(f64, PointId)> = None;
        for u in (0..n).filter(|&u| !is_center[u]) {
            if best.is_none_or(|(d, _)| near[u] > d) {
                best = Some((near[u], u));
            }
        }
        let (_, c) = best.expect("k <= n leaves a non-center point");
        centers.push(c);
        is_center[c] = true;
        for (u, d) in near.iter_mut().enumerate() {
            *d = d.min(m.dist(u, c));
        }
    }
    Ok(OrderedCover {
        centers,
        mode: CoverMode::Exact,
        queries_used: 0,
        uncertified_steps: Vec::new(),
    })
}

/// Voronoi-style clusters of the current centers, computed from rankings
/// only: each point joins the center it ranks earliest.
struct Clusters<'p> {
    profile: &'p OrdinalProfile,
    centers: Vec<PointId>,
    assign: Vec<usize>,
}

impl<'p> Clusters<'p> {
    fn new(profile: &'p OrdinalProfile, centers: &[PointId]) -> Self {
        let assign = (0..profile.len())
            .map(|u| {
                (0..centers.len())
                    .min_by_key(|&j| profile.position(u, centers[j]))
                    .expect("at least one center")
            })
            .collect();
        Self {
            profile,
            centers: centers.to_vec(),
            assign,
        }
    }

    /// Adds a center; returns, for every previous cluster, whether it lost
    /// members to the new one.
    fn add(&mut self, c: PointId) -> Vec<bool> {
        let j_new = self.centers.len();
        let mut lost = vec![false; j_new];
        for u in 0..self.assign.len() {
            let j = self.assign[u];
            if self.profile.position(u, c) < self.profile.position(u, self.centers[j]) {
                lost[j] = true;
                self.assign[u] = j_new;
            }
        }
        self.centers.push(c);
        lost
    }

    /// For every cluster the member its center ranks last, or `None` for a
    /// cluster holding only its center.
    fn farthest(&self) -> Vec<Option<PointId>> {
        let mut best: Vec<Option<PointId>> = vec![None; self.centers.len()];
        for (u, &j) in self.assign.iter().enumerate() {
            let t = self.centers[j];
            if u == t {
                continue;
            }
            let later =
                best[j].is_none_or(|b| self.profile.position(t, u) > self.profile.position(t, b));
            if later {
                best[j] = Some(u);
            }
        }
        best
    }
}

/// `max_u d(u, T_l)` with at most `l` fresh queries: one per center, to
/// the last member of its cluster in the center's ranking.
pub fn cluster_cost(
    prefix: &[PointId],
    oracle: &mut QueryOracle<'_>,
    profile: &OrdinalProfile,
) -> Result<f64> {
    if prefix.is_empty() {
        return Err(Error::EmptyCommittee);
    }
    let clusters = Clusters::new(profile, prefix);
    let mut cost = 0.0f64;
    for (j, f) in clusters.farthest().into_iter().enumerate() {
        if let Some(f) = f {
            cost = cost.max(oracle.query(f, prefix[j])?);
        }
    }
    Ok(cost)
}

/// Exact farthest-first selection from rankings plus one query per cluster
/// and step (cached across steps).
pub fn ordinal_greedy_full(
    oracle: &mut QueryOracle<'_>,
    profile: &OrdinalProfile,
    k: usize,
) -> Result<OrderedCover> {
    check_k(k, profile.len())?;
    let start = oracle.distinct();
    let mut clusters = Clusters::new(profile, &[0]);
    while clusters.centers.len() < k {
        let mut best: Option<(f64, PointId)> = None;
        for (j, f) in clusters.farthest().into_iter().enumerate() {
            let Some(f) = f else { continue };
            let d = oracle.query(f, clusters.centers[j])?;
            if best.is_none_or(|(bd, bf)| d > bd || (d == bd && f < bf)) {
                best = Some((d, f));
            }
        }
        let (_, c) = best.expect("k <= n leaves a non-center point");
        clusters.add(c);
    }
    Ok(OrderedCover {
        centers: clusters.centers,
        mode: CoverMode::OrdinalFull,
        queries_used: oracle.distinct() - start,
        uncertified_steps: Vec::new(),
    })
}

/// Farthest-first selection under a `2k` query allowance.
///
/// Each cluster carries an upper bound on its radius: exact once its current
/// farthest member has been queried, otherwise inherited (clusters only
/// shrink, and a point moving to a new center gets closer). A step refreshes
/// the stalest largest bound until the best exact candidate is at least half
/// of every remaining bound, which makes it a half-farthest point. Two
/// queries of allowance accrue per step; unused allowance carries over.
pub fn ordinal_greedy_lite(
    oracle: &mut QueryOracle<'_>,
    profile: &OrdinalProfile,
    k: usize,
) -> Result<OrderedCover> {
    check_k(k, profile.len())?;
    let start = oracle.distinct();
    let mut clusters = Clusters::new(profile, &[0]);
    let mut bound = vec![f64::INFINITY];
    let mut uncertified = Vec::new();
    while clusters.centers.len() < k {
        let step = clusters.centers.len();
        let mut allowance = (2 * step).saturating_sub(oracle.distinct() - start);
        let farthest = clusters.farthest();
        // (value if exact, candidate) per cluster with a non-center member.
        let mut known: Vec<Option<f64>> = vec![None; farthest.len()];
        for (j, f) in farthest.iter().enumerate() {
            if let Some(f) = *f {
                if let Some(d) = oracle.known(f, clusters.centers[j]) {
                    known[j] = Some(d);
                    bound[j] = d;
                }
            } else {
                bound[j] = 0.0;
            }
        }
        let best_exact = |known: &[Option<f64>]| {
            let mut best: Option<(f64, PointId)> = None;
            for (j, d) in known.iter().enumerate() {
                if let (Some(d), Some(f)) = (*d, farthest[j]) {
                    if best.is_none_or(|(bd, bf)| d > bd || (d == bd && f < bf)) {
                        best = Some((d, f));
                    }
                }
            }
            best
        };
        let top_stale = |known: &[Option<f64>], bound: &[f64]| {
            (0..known.len())
                .filter(|&j| known[j].is_none() && farthest[j].is_some())
                .max_by(|&a, &b| bound[a].total_cmp(&bound[b]).then(b.cmp(&a)))
        };
        let choice = loop {
            let best = best_exact(&known);
            let stale = top_stale(&known, &bound);
            let certified = match (stale, best) {
                (None, _) => true,
                (Some(j), Some((d, _))) => bound[j] <= 2.0 * d,
                (Some(_), None) => false,
            };
            if certified {
                break best.map(|(_, f)| f);
            }
            let j = stale.expect("uncertified implies a stale cluster");
            if allowance == 0 {
                uncertified.push(step + 1);
                break best.map(|(_, f)| f).or(farthest[j]);
            }
            let f = farthest[j].expect("stale clusters have a candidate");
            let d = oracle.query(f, clusters.centers[j])?;
            known[j] = Some(d);
            bound[j] = d;
            allowance -= 1;
        };
        let c = choice.expect("k <= n leaves a non-center point");
        let lost = clusters.add(c);
        let inherited = lost
            .iter()
            .zip(&bound)
            .filter(|(l, _)| **l)
            .map(|(_, b)| *b)
            .fold(0.0, f64::max);
        bound.push(inherited);
    }
    Ok(OrderedCover {
        centers: clusters.centers,
        mode: CoverMode::OrdinalLite,
        queries_used: oracle.distinct() - start,
        uncertified_steps: uncertified,
    })
}

/// Builds a cover in the given mode. `Exact` reads the oracle's metric
/// without charging it.
pub fn build_cover(
    mode: CoverMode,
    metric: &MetricSpace,
    oracle: &mut QueryOracle<'_>,
    profile: &OrdinalProfile,
    k: usize,
) -> Result<OrderedCover> {
    match mode {
        CoverMode::Exact => gonzalez_exact(metric, k),
        CoverMode::OrdinalFull => ordinal_greedy_full(oracle, profile, k),
        CoverMode::OrdinalLite => ordinal_greedy_lite(oracle, profile, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::social_cost;
    use crate::metric::{generate, GeneratorConfig, MetricKind};

    fn line() -> (MetricSpace, OrdinalProfile) {
        let m = MetricSpace::from_line(&[0.0, 1.0, 3.0, 7.0]).unwrap();
        let p = OrdinalProfile::derive(&m);
        (m, p)
    }

    #[test]
    fn gonzalez_on_line_fixture() {
        let (m, _) = line();
        assert_eq!(gonzalez_exact(&m, 2).unwrap().centers, vec![0, 3]);
        assert_eq!(gonzalez_exact(&m, 3).unwrap().centers, vec![0, 3, 2]);
        let all = gonzalez_exact(&m, 4).unwrap();
        let mut sorted = all.centers.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        assert_eq!(social_cost(&all.centers, &m).unwrap(), 0.0);
        assert!(gonzalez_exact(&m, 5).is_err());
    }

    #[test]
    fn ordinal_full_on_line_fixture() {
        let (m, p) = line();
        let mut o = QueryOracle::new(&m);
        let t = ordinal_greedy_full(&mut o, &p, 2).unwrap();
        assert_eq!(t.centers, vec![0, 3]);
        assert_eq!(t.queries_used, 1);
    }

    #[test]
    fn ordinal_lite_on_line_fixture() {
        let (m, p) = line();
        let mut o = QueryOracle::new(&m);
        let t = ordinal_greedy_lite(&mut o, &p, 2).unwrap();
        assert_eq!(t.centers, vec![0, 3]);
        let mut o = QueryOracle::new(&m);
        let t = ordinal_greedy_lite(&mut o, &p, 1).unwrap();
        assert_eq!(t.centers, vec![0]);
        assert_eq!(t.queries_used, 0);
    }

    #[test]
    fn ordinal_modes_select_all_points_when_k_equals_n() {
        let (m, p) = line();
        for lite in [false, true] {
            let mut o = QueryOracle::new(&m);
            let t = if lite {
                ordinal_greedy_lite(&mut o, &p, 4)
            } else {
                ordinal_greedy_full(&mut o, &p, 4)
            }
            .unwrap();
            let mut sorted = t.centers.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn cluster_cost_on_line_fixture() {
        let (m, p) = line();
        let mut o = QueryOracle::new(&m);
        assert_eq!(cluster_cost(&[0], &mut o, &p).unwrap(), 7.0);
        assert_eq!(o.distinct(), 1);
        let mut o = QueryOracle::new(&m);
        // p4's cluster is just itself.
        assert_eq!(cluster_cost(&[0, 3], &mut o, &p).unwrap(), 3.0);
        assert_eq!(o.distinct(), 1);
        let mut o = QueryOracle::new(&m);
        assert_eq!(cluster_cost(&[0, 1, 2, 3], &mut o, &p).unwrap(), 0.0);
        assert_eq!(o.distinct(), 0);
    }

    #[test]
    fn duplicate_points_do_not_stall_selection() {
        let m = MetricSpace::from_line(&[0.0, 0.0, 0.0, 5.0]).unwrap();
        let p = OrdinalProfile::derive(&m);
        for mode in [CoverMode::OrdinalFull, CoverMode::OrdinalLite] {
            let mut o = QueryOracle::new(&m);
            let t = build_cover(mode, &m, &mut o, &p, 4).unwrap();
            let mut sorted = t.centers.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn query_budgets_hold_on_generated_instances() {
        for seed in 0..20 {
            let kind = MetricKind::ALL[seed as usize % 3];
            let g = generate(&GeneratorConfig::new(kind, 60, seed)).unwrap();
            let p = OrdinalProfile::derive(&g.metric);
            for k in [1, 2, 5, 13, 30] {
                let mut o = QueryOracle::new(&g.metric);
                let full = ordinal_greedy_full(&mut o, &p, k).unwrap();
                assert!(full.queries_used <= (k * k - k) / 2);
                let mut o = QueryOracle::new(&g.metric);
                let lite = ordinal_greedy_lite(&mut o, &p, k).unwrap();
                assert!(lite.queries_used <= 2 * k);
            }
        }
    }

    #[test]
    fn ordinal_full_picks_a_farthest_point_every_step() {
        for seed in 0..20 {
            let kind = MetricKind::ALL[seed as usize % 3];
            let g = generate(&GeneratorConfig::new(kind, 40, seed)).unwrap();
            let p = OrdinalProfile::derive(&g.metric);
            let mut o = QueryOracle::new(&g.metric);
            let t = ordinal_greedy_full(&mut o, &p, 10).unwrap();
            for i in 1..t.k() {
                let prefix = t.prefix(i);
                let far = (0..g.metric.len())
                    .map(|u| g.metric.dist_to_set(u, prefix))
                    .fold(0.0, f64::max);
                assert_eq!(g.metric.dist_to_set(t.centers[i], prefix), far);
            }
        }
    }
}
