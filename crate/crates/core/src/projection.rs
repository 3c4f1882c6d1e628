//! Projection graphs between a center prefix and the reduced groups.
//!
//! The trick that keeps this cheap: for a fixed center `s`, the nearest
//! member of each group and the order of the groups by `d(s, G)` can both be
//! read off `rank_s` without a single query. Thresholding `d(s, G) <= λ`
//! then becomes a binary search along that order, and each probe costs one
//! query to the probed group's representative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ReducedCommittee, ReducedInstance};
use crate::metric::{OrdinalProfile, QueryOracle};
use crate::PointId;

/// The earliest member of `group` in `rank_s`. Free.
pub fn nearest_in_group(
    s: PointId,
    group: &[PointId],
    profile: &OrdinalProfile,
) -> Result<PointId> {
    profile
        .earliest(s, group.iter().copied())
        .ok_or(Error::EmptyGroup(0))
}

/// Per-center orderings of the reduced groups by `d(s, G)`, nondecreasing.
///
/// Groups are ranked by the position of their nearest member in `rank_s`;
/// groups sharing a representative (copies of one base group, fillers) are
/// kept in group-index order.
#[derive(Debug, Clone)]
pub struct GroupOrderView {
    centers: Vec<PointId>,
    /// `order[i][p]`: group at position `p` for center `i`.
    order: Vec<Vec<usize>>,
    /// `reps[i][p]`: nearest member of `order[i][p]` to center `i`.
    reps: Vec<Vec<PointId>>,
}

impl GroupOrderView {
    pub fn new(centers: &[PointId], r: &ReducedInstance<'_>) -> Result<Self> {
        let profile = r.profile();
        let mut order = Vec::with_capacity(centers.len());
        let mut reps = Vec::with_capacity(centers.len());
        for &s in centers {
            let mut entries = Vec::with_capacity(r.k());
            for (j, g) in r.groups().iter().enumerate() {
                let rep = profile
                    .earliest(s, g.members.iter().copied())
                    .ok_or(Error::EmptyGroup(j))?;
                entries.push((profile.position(s, rep), j, rep));
            }
            entries.sort_unstable();
            order.push(entries.iter().map(|e| e.1).collect());
            reps.push(entries.iter().map(|e| e.2).collect());
        }
        Ok(Self {
            centers: centers.to_vec(),
            order,
            reps,
        })
    }

    pub fn centers(&self) -> &[PointId] {
        &self.centers
    }

    pub fn num_groups(&self) -> usize {
        self.order.first().map_or(0, Vec::len)
    }

    /// Groups in nondecreasing distance from center `i`.
    pub fn order(&self, i: usize) -> &[usize] {
        &self.order[i]
    }

    pub fn rep(&self, i: usize, pos: usize) -> PointId {
        self.reps[i][pos]
    }

    /// Nearest member of `group` to center `i`.
    pub fn rep_of_group(&self, i: usize, group: usize) -> PointId {
        let pos = self.order[i]
            .iter()
            .position(|&g| g == group)
            .expect("group index in range");
        self.reps[i][pos]
    }

    /// `d(s_i, G)` for the group at position `pos`; one query (cached).
    pub fn value(&self, oracle: &mut QueryOracle<'_>, i: usize, pos: usize) -> Result<f64> {
        oracle.query(self.centers[i], self.reps[i][pos])
    }

    /// Number of positions in `lo..hi` whose value passes the threshold,
    /// plus `lo`: the boundary index in the full order. The caller
    /// guarantees every position before `lo` passes and none from `hi` on.
    /// `strict` selects `d < λ` instead of `d <= λ`. Lower midpoint probes.
    pub fn boundary(
        &self,
        oracle: &mut QueryOracle<'_>,
        i: usize,
        lambda: f64,
        strict: bool,
        mut lo: usize,
        mut hi: usize,
    ) -> Result<usize> {
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let d = self.value(oracle, i, mid)?;
            let pass = if strict { d < lambda } else { d <= lambda };
            if pass {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// Bipartite graph between the first `ℓ` centers and the `k` groups, with an
/// edge wherever `d(s, G) <= λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionGraph {
    /// `adj[i]`: groups adjacent to center `i`, ascending.
    pub adj: Vec<Vec<usize>>,
    pub num_groups: usize,
    pub lambda: f64,
}

impl ProjectionGraph {
    pub fn from_adjacency(adj: Vec<Vec<usize>>, num_groups: usize, lambda: f64) -> Self {
        let adj = adj
            .into_iter()
            .map(|mut a| {
                a.sort_unstable();
                a.dedup();
                a
            })
            .collect();
        Self {
            adj,
            num_groups,
            lambda,
        }
    }

    /// Edges from per-center boundaries into the view's orders.
    fn from_boundaries(view: &GroupOrderView, bounds: &[usize], lambda: f64) -> Self {
        let adj = bounds
            .iter()
            .enumerate()
            .map(|(i, &b)| view.order(i)[..b].to_vec())
            .collect();
        Self::from_adjacency(adj, view.num_groups(), lambda)
    }

    pub fn num_left(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, i: usize, g: usize) -> bool {
        self.adj[i].binary_search(&g).is_ok()
    }
}

/// Builds `H^ℓ_λ` for the first `ell` centers of `view`.
///
/// Each center costs at most `⌈log₂(k+1)⌉` fresh queries. An infinite `λ`
/// gives the complete graph and a negative one the empty graph, both free.
pub fn build_projection_graph(
    ell: usize,
    lambda: f64,
    oracle: &mut QueryOracle<'_>,
    view: &GroupOrderView,
) -> Result<ProjectionGraph> {
    let k = view.num_groups();
    let mut bounds = Vec::with_capacity(ell);
    for i in 0..ell {
        let b = if lambda == f64::INFINITY {
            k
        } else if lambda < 0.0 {
            0
        } else {
            view.boundary(oracle, i, lambda, false, 0, k)?
        };
        bounds.push(b);
    }
    Ok(ProjectionGraph::from_boundaries(view, &bounds, lambda))
}

/// A matching of centers into groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    /// `pairs[i]`: group matched to center `i`.
    pub pairs: Vec<Option<usize>>,
    pub left_perfect: bool,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.iter().flatten().count()
    }
}

/// Maximum bipartite matching by augmenting paths (Kuhn). Returns the
/// matching and whether it covers every center.
pub fn left_perfect_matching(h: &ProjectionGraph) -> Matching {
    let mut group_match: Vec<Option<usize>> = vec![None; h.num_groups];
    let mut visited = vec![0usize; h.num_groups];
    for i in 0..h.num_left() {
        augment(h, i, i + 1, &mut visited, &mut group_match);
    }
    let mut pairs = vec![None; h.num_left()];
    for (g, m) in group_match.iter().enumerate() {
        if let Some(i) = *m {
            pairs[i] = Some(g);
        }
    }
    let left_perfect = pairs.iter().all(Option::is_some);
    Matching {
        pairs,
        left_perfect,
    }
}

fn augment(
    h: &ProjectionGraph,
    i: usize,
    stamp: usize,
    visited: &mut [usize],
    group_match: &mut [Option<usize>],
) -> bool {
    for &g in &h.adj[i] {
        if visited[g] == stamp {
            continue;
        }
        visited[g] = stamp;
        let free = match group_match[g] {
            None => true,
            Some(other) => augment(h, other, stamp, visited, group_match),
        };
        if free {
            group_match[g] = Some(i);
            return true;
        }
    }
    false
}

/// `λ_ℓ` from a fully materialized value table: the smallest value `v`
/// among `values[i][g]` (center `i < ℓ`, group `g`) whose threshold graph
/// admits a left-perfect matching. No queries.
pub fn lambda_exact_scan(values: &[Vec<f64>]) -> Result<f64> {
    let k = values.first().map_or(0, Vec::len);
    let mut candidates: Vec<f64> = values.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |lambda: f64| {
        let adj = values
            .iter()
            .map(|row| (0..k).filter(|&g| row[g] <= lambda).collect())
            .collect();
        left_perfect_matching(&ProjectionGraph::from_adjacency(adj, k, lambda)).left_perfect
    };
    // Feasibility is monotone in the threshold.
    let idx = candidates.partition_point(|&v| !feasible(v));
    candidates.get(idx).copied().ok_or(Error::NoFeasibleLambda)
}

/// Outcome of one predicate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredicateEval {
    pub ell: usize,
    pub holds: bool,
    /// `cost(T_ℓ)`.
    pub cover_cost: f64,
    /// Fresh distinct pairs charged by this evaluation.
    pub fresh_queries: usize,
}

/// `P(ℓ) ≡ 4·λ_ℓ <= cost(T_ℓ)`, decided without computing `λ_ℓ`: build the
/// graph at `cost(T_ℓ)/4` and test for a left-perfect matching.
pub fn evaluate_predicate(
    ell: usize,
    view: &GroupOrderView,
    oracle: &mut QueryOracle<'_>,
    profile: &OrdinalProfile,
) -> Result<PredicateEval> {
    let k = view.centers().len();
    if ell == 0 || ell > k {
        return Err(Error::InvalidPrefix { ell, k });
    }
    let start = oracle.distinct();
    let cover_cost = crate::greedy::cluster_cost(&view.centers()[..ell], oracle, profile)?;
    let h = build_projection_graph(ell, cover_cost / 4.0, oracle, view)?;
    let holds = left_perfect_matching(&h).left_perfect;
    Ok(PredicateEval {
        ell,
        holds,
        cover_cost,
        fresh_queries: oracle.distinct() - start,
    })
}

/// Turns a left-perfect matching into a reduced committee: each matched
/// group contributes its member nearest to the matched center, every other
/// group its lowest-id member. Free.
pub fn extract_solution(
    matching: &Matching,
    prefix: &[PointId],
    r: &ReducedInstance<'_>,
) -> Result<ReducedCommittee> {
    if !matching.left_perfect || matching.pairs.len() != prefix.len() {
        return Err(Error::NotLeftPerfect);
    }
    let profile = r.profile();
    let mut picks: Vec<Option<PointId>> = vec![None; r.k()];
    for (&s, g) in prefix.iter().zip(&matching.pairs) {
        let g = g.expect("left-perfect");
        picks[g] = Some(nearest_in_group(s, r.members(g), profile)?);
    }
    let picks = picks
        .into_iter()
        .enumerate()
        .map(|(g, p)| {
            p.or_else(|| r.members(g).first().copied())
                .ok_or(Error::EmptyGroup(g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReducedCommittee { picks })
}
