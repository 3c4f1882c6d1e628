//! The 3-approximation: materialize every `d(s, G)` for the full center
//! sequence, then pick the prefix minimizing `cost(T_ℓ) + λ_ℓ`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::greedy::{build_cover, cluster_cost, CoverMode, OrderedCover};
use crate::instance::{lift_solution, Committee, ReducedCommittee, ReducedInstance};
use crate::metric::{LedgerSnapshot, QueryOracle};
use crate::projection::{
    build_projection_graph, extract_solution, lambda_exact_scan, left_perfect_matching,
    GroupOrderView,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeSolution {
    pub committee: Committee,
    pub reduced: ReducedCommittee,
    pub cover: OrderedCover,
    pub chosen_ell: usize,
    pub lambda: f64,
    /// `λ_ℓ` for `ℓ = 1..=k`.
    pub lambdas: Vec<f64>,
    /// `cost(T_ℓ)` for `ℓ = 1..=k`.
    pub cover_costs: Vec<f64>,
    pub queries: LedgerSnapshot,
}

pub fn solve_three(r: &ReducedInstance<'_>, oracle: &mut QueryOracle<'_>) -> Result<ThreeSolution> {
    solve_three_with(r, oracle, CoverMode::OrdinalFull)
}

/// [`solve_three`] over a cover built in `mode`.
pub fn solve_three_with(
    r: &ReducedInstance<'_>,
    oracle: &mut QueryOracle<'_>,
    mode: CoverMode,
) -> Result<ThreeSolution> {
    let k = r.k();
    let profile = r.profile();
    let cover = build_cover(mode, r.metric(), oracle, profile, k)?;
    let view = GroupOrderView::new(&cover.centers, r)?;

    let mut values = vec![vec![0.0; k]; k];
    for (i, row) in values.iter_mut().enumerate() {
        for (pos, &g) in view.order(i).iter().enumerate() {
            row[g] = view.value(oracle, i, pos)?;
        }
    }
    let mut lambdas = Vec::with_capacity(k);
    let mut cover_costs = Vec::with_capacity(k);
    for ell in 1..=k {
        lambdas.push(lambda_exact_scan(&values[..ell])?);
        cover_costs.push(cluster_cost(cover.prefix(ell), oracle, profile)?);
    }
    let mut chosen = 0;
    for i in 1..k {
        if cover_costs[i] + lambdas[i] < cover_costs[chosen] + lambdas[chosen] {
            chosen = i;
        }
    }
    let chosen_ell = chosen + 1;
    let lambda = lambdas[chosen];

    // Every value is already known, so this build is free.
    let h = build_projection_graph(chosen_ell, lambda, oracle, &view)?;
    let matching = left_perfect_matching(&h);
    let reduced = extract_solution(&matching, cover.prefix(chosen_ell), r)?;
    let committee = lift_solution(&reduced, r)?;
    Ok(ThreeSolution {
        committee,
        reduced,
        cover,
        chosen_ell,
        lambda,
        lambdas,
        cover_costs,
        queries: oracle.ledger().snapshot(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::line_instance;
    use crate::instance::{reduce, social_cost};

    #[test]
    fn line_fixture() {
        let inst = line_instance();
        let r = reduce(&inst).unwrap();
        let mut o = QueryOracle::new(inst.metric());
        let s = solve_three(&r, &mut o).unwrap();
        assert!(inst.is_feasible(&s.committee));
        assert!(social_cost(s.committee.members(), inst.metric()).unwrap() <= 9.0);
        assert!(s.queries.distinct <= 8);
        assert_eq!(s.lambdas.len(), 2);
    }

    #[test]
    fn one_center_per_group_gives_zero_lambda() {
        // Greedy from 0 picks 3 next; 0 and 3 sit in different groups.
        let m = crate::MetricSpace::from_line(&[0.0, 1.0, 2.0, 10.0]).unwrap();
        let inst =
            crate::FairInstance::new(m, 2, vec![vec![0, 1], vec![2, 3]], vec![1, 1]).unwrap();
        let r = reduce(&inst).unwrap();
        let mut o = QueryOracle::new(inst.metric());
        let s = solve_three(&r, &mut o).unwrap();
        assert_eq!(s.lambdas[1], 0.0);
        assert_eq!(s.committee.members(), &[0, 3]);
        assert_eq!(
            social_cost(s.committee.members(), inst.metric()).unwrap(),
            s.cover_costs[1]
        );
    }
}
