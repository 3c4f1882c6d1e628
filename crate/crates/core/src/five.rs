//! The 5-approximation: binary search over a matching predicate, with
//! `λ_ℓ` found by median-of-medians pruning instead of a full `ℓ × k` scan.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::{build_cover, cluster_cost, CoverMode, OrderedCover};
use crate::instance::{lift_solution, Committee, ReducedCommittee, ReducedInstance};
use crate::metric::{LedgerSnapshot, QueryOracle};
use crate::projection::{
    evaluate_predicate, extract_solution, left_perfect_matching, GroupOrderView, PredicateEval,
    ProjectionGraph,
};

/// The live candidate values for `λ_ℓ`: per center `i`, the positions
/// `windows[i].0 .. windows[i].1` of its group order. Values are never
/// stored; they are queried on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub windows: Vec<(usize, usize)>,
    pub best_feasible: Option<f64>,
}

impl SearchSpace {
    pub fn full(ell: usize, k: usize) -> Self {
        Self {
            windows: vec![(0, k); ell],
            best_feasible: None,
        }
    }

    pub fn total_size(&self) -> usize {
        self.windows.iter().map(|&(lo, hi)| hi - lo).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomStep {
    pub old_total: usize,
    pub new_total: usize,
    pub pivot: f64,
    pub feasible: bool,
    pub fresh_queries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSearch {
    pub ell: usize,
    pub lambda: f64,
    pub tau0: f64,
    pub steps: Vec<MomStep>,
    pub fresh_queries: usize,
}

/// One pruning round.
///
/// Every live window contributes its lower median; the pivot is the median
/// of the slice at which the median-sorted prefix weight first reaches half
/// the space. A feasible pivot is recorded and everything `>= τ` goes; an
/// infeasible one takes everything `<= τ` with it. Either way at least a
/// quarter of the space is dropped.
pub fn mom_step(
    space: &mut SearchSpace,
    oracle: &mut QueryOracle<'_>,
    view: &GroupOrderView,
) -> Result<MomStep> {
    let old_total = space.total_size();
    assert!(old_total > 0, "mom_step on an empty search space");
    let start = oracle.distinct();

    let mut slices = Vec::new();
    for (i, &(lo, hi)) in space.windows.iter().enumerate() {
        if lo < hi {
            let mid = lo + (hi - lo - 1) / 2;
            slices.push((view.value(oracle, i, mid)?, i, hi - lo));
        }
    }
    slices.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut prefix = 0;
    let pivot = slices
        .iter()
        .find(|s| {
            prefix += s.2;
            2 * prefix >= old_total
        })
        .map(|s| s.0)
        .expect("prefix reaches the total");

    // Everything before a window passes any surviving pivot and everything
    // after it fails, so each boundary search stays inside the window.
    let mut bounds = Vec::with_capacity(space.windows.len());
    for (i, &(lo, hi)) in space.windows.iter().enumerate() {
        bounds.push(view.boundary(oracle, i, pivot, false, lo, hi)?);
    }
    let adj = bounds
        .iter()
        .enumerate()
        .map(|(i, &b)| view.order(i)[..b].to_vec())
        .collect();
    let h = ProjectionGraph::from_adjacency(adj, view.num_groups(), pivot);
    let feasible = left_perfect_matching(&h).left_perfect;

    if feasible {
        space.best_feasible = Some(pivot);
        for (i, w) in space.windows.iter_mut().enumerate() {
            w.1 = view.boundary(oracle, i, pivot, true, w.0, bounds[i])?;
        }
    } else {
        for (w, &b) in space.windows.iter_mut().zip(&bounds) {
            w.0 = b;
        }
    }
    Ok(MomStep {
        old_total,
        new_total: space.total_size(),
        pivot,
        feasible,
        fresh_queries: oracle.distinct() - start,
    })
}

/// Exact `λ_ℓ` for the first `ell` centers of `view`.
pub fn find_lambda(
    ell: usize,
    oracle: &mut QueryOracle<'_>,
    view: &GroupOrderView,
) -> Result<LambdaSearch> {
    let k = view.num_groups();
    if ell == 0 || ell > view.centers().len() || ell > k {
        return Err(Error::InvalidPrefix { ell, k });
    }
    let start = oracle.distinct();
    let mut tau0 = f64::NEG_INFINITY;
    for i in 0..ell {
        tau0 = tau0.max(view.value(oracle, i, k - 1)?);
    }
    let mut space = SearchSpace::full(ell, k);
    space.best_feasible = Some(tau0);
    let mut steps = Vec::new();
    while !space.is_empty() {
        steps.push(mom_step(&mut space, oracle, view)?);
    }
    let lambda = space
        .best_feasible
        .expect("the maximum value always admits a matching");
    Ok(LambdaSearch {
        ell,
        lambda,
        tau0,
        steps,
        fresh_queries: oracle.distinct() - start,
    })
}

/// `L`, `R`, `M` of the prefix search and the final choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarySearchState {
    pub left: usize,
    pub right: usize,
    pub mid: usize,
    pub hat_ell: usize,
    pub predicate_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveDiagnostics {
    pub predicates: Vec<PredicateEval>,
    pub lambda_searches: Vec<LambdaSearch>,
    pub search: BinarySearchState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveSolution {
    pub committee: Committee,
    pub reduced: ReducedCommittee,
    pub cover: OrderedCover,
    pub hat_ell: usize,
    pub lambda: f64,
    pub cover_cost: f64,
    pub diagnostics: FiveDiagnostics,
    pub queries: LedgerSnapshot,
}

pub fn solve_five(r: &ReducedInstance<'_>, oracle: &mut QueryOracle<'_>) -> Result<FiveSolution> {
    solve_five_with(r, oracle, CoverMode::OrdinalLite)
}

/// [`solve_five`] over a cover built in `mode`.
pub fn solve_five_with(
    r: &ReducedInstance<'_>,
    oracle: &mut QueryOracle<'_>,
    mode: CoverMode,
) -> Result<FiveSolution> {
    let k = r.k();
    let profile = r.profile();
    let cover = build_cover(mode, r.metric(), oracle, profile, k)?;
    let view = GroupOrderView::new(&cover.centers, r)?;
    let mut predicates = Vec::new();
    let mut lambda_searches = Vec::new();
    let mut eval = |ell: usize, oracle: &mut QueryOracle<'_>| -> Result<bool> {
        let e = evaluate_predicate(ell, &view, oracle, profile)?;
        predicates.push(e);
        Ok(e.holds)
    };

    let mut search = BinarySearchState {
        left: 1,
        right: k,
        mid: 1,
        hat_ell: 1,
        predicate_evaluations: 0,
    };
    let hat_ell = if !eval(1, oracle)? {
        1
    } else if k == 1 || eval(k, oracle)? {
        k
    } else {
        // P(L) holds and P(R) fails throughout.
        while search.right - search.left > 1 {
            search.mid = (search.left + search.right).div_ceil(2);
            if eval(search.mid, oracle)? {
                search.left = search.mid;
            } else {
                search.right = search.mid;
            }
        }
        let l = search.left;
        let next = find_lambda(l + 1, oracle, &view)?;
        let next_lambda = next.lambda;
        lambda_searches.push(next);
        if cluster_cost(cover.prefix(l), oracle, profile)? <= 4.0 * next_lambda {
            l
        } else {
            l + 1
        }
    };
    search.hat_ell = hat_ell;
    search.predicate_evaluations = predicates.len();

    let found = find_lambda(hat_ell, oracle, &view)?;
    let lambda = found.lambda;
    lambda_searches.push(found);
    let cover_cost = cluster_cost(cover.prefix(hat_ell), oracle, profile)?;
    let h = crate::projection::build_projection_graph(hat_ell, lambda, oracle, &view)?;
    let matching = left_perfect_matching(&h);
    let reduced = extract_solution(&matching, cover.prefix(hat_ell), r)?;
    let committee = lift_solution(&reduced, r)?;
    Ok(FiveSolution {
        committee,
        reduced,
        cover,
        hat_ell,
        lambda,
        cover_cost,
        diagnostics: FiveDiagnostics {
            predicates,
            lambda_searches,
            search,
        },
        queries: oracle.ledger().snapshot(),
    })
}
