//! Fair k-center instances, the unit-requirement reduction, feasibility and
//! ground-truth cost.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, OrdinalProfile};
use crate::PointId;

/// Points, a committee size `k`, a partition of the points into groups and a
/// minimum representation requirement per group.
///
/// The ordinal profile is derived on construction and owned alongside the
/// metric; both are immutable afterwards.
#[derive(Debug, Clone)]
pub struct FairInstance {
    metric: MetricSpace,
    profile: OrdinalProfile,
    k: usize,
    groups: Vec<Vec<PointId>>,
    requirements: Vec<usize>,
    group_of: Vec<usize>,
}

impl FairInstance {
    pub fn new(
        metric: MetricSpace,
        k: usize,
        groups: Vec<Vec<PointId>>,
        requirements: Vec<usize>,
    ) -> Result<Self> {
        let n = metric.len();
        if k == 0 {
            return Err(Error::InvalidInstance("k must be at least 1".into()));
        }
        if k > n {
            return Err(Error::KExceedsN { k, n });
        }
        if groups.len() != requirements.len() {
            return Err(Error::InvalidInstance(format!(
                "{} groups but {} requirements",
                groups.len(),
                requirements.len()
            )));
        }
        let mut group_of = vec![usize::MAX; n];
        let mut groups = groups;
        for (i, g) in groups.iter_mut().enumerate() {
            g.sort_unstable();
            for &p in g.iter() {
                if p >= n {
                    return Err(Error::InvalidPoint(p));
                }
                if group_of[p] != usize::MAX {
                    return Err(Error::InvalidInstance(format!(
                        "point {p} appears in more than one group"
                    )));
                }
                group_of[p] = i;
            }
        }
        if let Some(p) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::InvalidInstance(format!("point {p} is in no group")));
        }
        let sum: usize = requirements.iter().sum();
        if sum > k {
            return Err(Error::RequirementsExceedK { sum, k });
        }
        for (i, (&a, g)) in requirements.iter().zip(&groups).enumerate() {
            if a > g.len() {
                return Err(Error::InvalidInstance(format!(
                    "group {i} requires {a} members but has only {}",
                    g.len()
                )));
            }
        }
        let profile = OrdinalProfile::derive(&metric);
        Ok(Self {
            metric,
            profile,
            k,
            groups,
            requirements,
            group_of,
        })
    }

    pub fn metric(&self) -> &MetricSpace {
        &self.metric
    }

    pub fn profile(&self) -> &OrdinalProfile {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.metric.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn groups(&self) -> &[Vec<PointId>] {
        &self.groups
    }

    pub fn requirements(&self) -> &[usize] {
        &self.requirements
    }

    pub fn group_of(&self, p: PointId) -> usize {
        self.group_of[p]
    }

    pub fn is_feasible(&self, s: &Committee) -> bool {
        is_feasible(s, self)
    }
}

/// A set of centers, stored sorted and without repeats.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Committee(Vec<PointId>);

impl Committee {
    pub fn new(mut members: Vec<PointId>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self(members)
    }

    pub fn members(&self) -> &[PointId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.0.binary_search(&p).is_ok()
    }
}

impl FromIterator<PointId> for Committee {
    fn from_iter<I: IntoIterator<Item = PointId>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// True iff `|S| = k` and every group meets its requirement.
pub fn is_feasible(s: &Committee, inst: &FairInstance) -> bool {
    if s.len() != inst.k() || s.members().iter().any(|&p| p >= inst.n()) {
        return false;
    }
    let mut counts = vec![0usize; inst.groups().len()];
    for &p in s.members() {
        counts[inst.group_of(p)] += 1;
    }
    counts
        .iter()
        .zip(inst.requirements())
        .all(|(&c, &a)| c >= a)
}

/// `max_u d(u, S)` on the full metric. Never touches a ledger.
pub fn social_cost(s: &[PointId], m: &MetricSpace) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptyCommittee);
    }
    Ok((0..m.len())
        .map(|u| m.dist_to_set(u, s))
        .fold(0.0, f64::max))
}

/// Where a reduced group came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSource {
    /// Copy number `copy` of base group `group`.
    Copy { group: usize, copy: usize },
    /// A full copy of the universe, added when the requirements sum below k.
    Filler { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGroup {
    /// Original ids of the copied points, ascending.
    pub members: Vec<PointId>,
    pub source: GroupSource,
}

/// A point of the duplicated universe: the copy of `origin` living in
/// reduced group `group`. Copies in different groups are distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedPoint {
    pub group: usize,
    pub origin: PointId,
}

/// The equivalent instance with exactly `k` groups of requirement one.
///
/// Copies share every distance and ranking with their original, so all
/// distance queries are issued on original ids and duplicates never cost
/// anything. Clients are always the base universe.
#[derive(Debug, Clone)]
pub struct ReducedInstance<'a> {
    base: &'a FairInstance,
    groups: Vec<ReducedGroup>,
}

/// Builds the reduced instance: `alpha_i` copies of each base group in
/// group order, then `k - sum(alpha)` copies of the whole universe.
/// Zero-requirement groups contribute no copies.
pub fn reduce(inst: &FairInstance) -> Result<ReducedInstance<'_>> {
    let r: usize = inst.requirements().iter().sum();
    if r > inst.k() {
        return Err(Error::RequirementsExceedK {
            sum: r,
            k: inst.k(),
        });
    }
    let mut groups = Vec::with_capacity(inst.k());
    for (i, (g, &a)) in inst.groups().iter().zip(inst.requirements()).enumerate() {
        for copy in 0..a {
            groups.push(ReducedGroup {
                members: g.clone(),
                source: GroupSource::Copy { group: i, copy },
            });
        }
    }
    let everyone: Vec<PointId> = (0..inst.n()).collect();
    for index in 0..inst.k() - r {
        groups.push(ReducedGroup {
            members: everyone.clone(),
            source: GroupSource::Filler { index },
        });
    }
    Ok(ReducedInstance { base: inst, groups })
}

impl<'a> ReducedInstance<'a> {
    pub fn base(&self) -> &'a FairInstance {
        self.base
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[ReducedGroup] {
        &self.groups
    }

    pub fn members(&self, group: usize) -> &[PointId] {
        &self.groups[group].members
    }

    pub fn metric(&self) -> &'a MetricSpace {
        self.base.metric()
    }

    pub fn profile(&self) -> &'a OrdinalProfile {
        self.base.profile()
    }

    /// Every point of the duplicated universe.
    pub fn points(&self) -> impl Iterator<Item = ReducedPoint> + '_ {
        self.groups.iter().enumerate().flat_map(|(group, g)| {
            g.members
                .iter()
                .map(move |&origin| ReducedPoint { group, origin })
        })
    }

    pub fn origin(&self, p: ReducedPoint) -> PointId {
        p.origin
    }

    pub fn is_feasible(&self, s: &ReducedCommittee) -> bool {
        s.picks.len() == self.k()
            && s.picks
                .iter()
                .enumerate()
                .all(|(j, p)| self.members(j).binary_search(p).is_ok())
    }
}

/// A committee of the reduced instance: exactly one copy per reduced group,
/// `picks[j]` being the original id chosen from group `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedCommittee {
    pub picks: Vec<PointId>,
}

impl ReducedCommittee {
    pub fn points(&self) -> impl Iterator<Item = ReducedPoint> + '_ {
        self.picks
            .iter()
            .enumerate()
            .map(|(group, &origin)| ReducedPoint { group, origin })
    }

    /// Distinct originals, ascending.
    pub fn origins(&self) -> Vec<PointId> {
        self.picks
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

/// Maps a reduced solution back to the base instance.
///
/// Originals are deduplicated; groups left under their requirement are then
/// topped up with their lowest-id unused members, and any remaining slots
/// with the lowest-id unused points overall. The result is feasible and
/// contains every original of `s`, so its cost is no larger.
pub fn lift_solution(s: &ReducedCommittee, r: &ReducedInstance<'_>) -> Result<Committee> {
    if !r.is_feasible(s) {
        return Err(Error::InfeasibleCommittee(
            "reduced committee must pick one member from each reduced group".into(),
        ));
    }
    let base = r.base();
    let mut chosen: BTreeSet<PointId> = s.picks.iter().copied().collect();
    let mut counts = vec![0usize; base.groups().len()];
    for &p in &chosen {
        counts[base.group_of(p)] += 1;
    }
    for (i, g) in base.groups().iter().enumerate() {
        let missing = base.requirements()[i].saturating_sub(counts[i]);
        let fill: Vec<PointId> = g
            .iter()
            .copied()
            .filter(|p| !chosen.contains(p))
            .take(missing)
            .collect();
        chosen.extend(fill);
    }
    let extra: Vec<PointId> = (0..base.n())
        .filter(|p| !chosen.contains(p))
        .take(base.k().saturating_sub(chosen.len()))
        .collect();
    chosen.extend(extra);
    let lifted = Committee::new(chosen.into_iter().collect());
    debug_assert!(base.is_feasible(&lifted));
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::line_instance;

    #[test]
    fn rejects_bad_instances() {
        let m = || MetricSpace::from_line(&[0.0, 1.0, 3.0]).unwrap();
        assert!(matches!(
            FairInstance::new(m(), 2, vec![vec![0, 1, 2]], vec![3]),
            Err(Error::RequirementsExceedK { sum: 3, k: 2 })
        ));
        assert!(matches!(
            FairInstance::new(m(), 4, vec![vec![0, 1, 2]], vec![1]),
            Err(Error::KExceedsN { .. })
        ));
        assert!(FairInstance::new(m(), 2, vec![vec![0, 1], vec![1, 2]], vec![1, 1]).is_err());
        assert!(FairInstance::new(m(), 2, vec![vec![0, 1]], vec![1]).is_err());
        assert!(FairInstance::new(m(), 2, vec![vec![0, 1], vec![2]], vec![0, 2]).is_err());
        assert!(FairInstance::new(m(), 0, vec![vec![0, 1, 2]], vec![0]).is_err());
    }

    #[test]
    fn feasibility() {
        let inst = line_instance();
        assert!(inst.is_feasible(&Committee::new(vec![2, 3])));
        assert!(!inst.is_feasible(&Committee::new(vec![0, 2])));
        assert!(!inst.is_feasible(&Committee::new(vec![3])));
        assert!(!inst.is_feasible(&Committee::new(vec![0, 1, 3])));
    }

    #[test]
    fn costs_on_line_fixture() {
        let inst = line_instance();
        let m = inst.metric();
        assert_eq!(social_cost(&[0, 3], m).unwrap(), 3.0);
        assert_eq!(social_cost(&[0, 1, 2, 3], m).unwrap(), 0.0);
        assert_eq!(social_cost(&[0], m).unwrap(), 7.0);
        assert_eq!(social_cost(&[], m), Err(Error::EmptyCommittee));
    }

    #[test]
    fn reduce_unit_requirements() {
        let inst = line_instance();
        let r = reduce(&inst).unwrap();
        assert_eq!(r.k(), 2);
        assert_eq!(r.members(0), &[0, 2]);
        assert_eq!(r.members(1), &[1, 3]);
        assert!(r
            .groups()
            .iter()
            .all(|g| matches!(g.source, GroupSource::Copy { .. })));
    }

    #[test]
    fn reduce_zero_requirement_gives_fillers() {
        let m = MetricSpace::from_line(&[0.0, 1.0, 3.0, 7.0]).unwrap();
        let inst = FairInstance::new(m, 3, vec![vec![0, 1, 2, 3]], vec![0]).unwrap();
        let r = reduce(&inst).unwrap();
        assert_eq!(r.k(), 3);
        for (i, g) in r.groups().iter().enumerate() {
            assert_eq!(g.members, vec![0, 1, 2, 3]);
            assert_eq!(g.source, GroupSource::Filler { index: i });
        }
    }

    #[test]
    fn reduce_mixed_requirements() {
        let m = MetricSpace::from_line(&[0.0, 1.0, 3.0, 7.0, 8.0]).unwrap();
        let inst = FairInstance::new(m, 4, vec![vec![0, 2, 4], vec![1, 3]], vec![2, 1]).unwrap();
        let r = reduce(&inst).unwrap();
        let sources: Vec<_> = r.groups().iter().map(|g| g.source).collect();
        assert_eq!(
            sources,
            vec![
                GroupSource::Copy { group: 0, copy: 0 },
                GroupSource::Copy { group: 0, copy: 1 },
                GroupSource::Copy { group: 1, copy: 0 },
                GroupSource::Filler { index: 0 },
            ]
        );
        assert_eq!(r.members(3), &[0, 1, 2, 3, 4]);
        assert_eq!(r.points().count(), 3 + 3 + 2 + 5);
    }

    #[test]
    fn lift_dedupes_and_pads() {
        let m = MetricSpace::from_line(&[0.0, 1.0, 3.0, 7.0, 8.0]).unwrap();
        let inst = FairInstance::new(m, 4, vec![vec![0, 2, 4], vec![1, 3]], vec![2, 1]).unwrap();
        let r = reduce(&inst).unwrap();
        // Both copies of G1 pick point 2; the filler picks point 3.
        let s = ReducedCommittee {
            picks: vec![2, 2, 3, 3],
        };
        let lifted = lift_solution(&s, &r).unwrap();
        // 2 and 3 kept, G1 topped up with 0, then the lowest unused id (1).
        assert_eq!(lifted.members(), &[0, 1, 2, 3]);
        assert!(inst.is_feasible(&lifted));
    }

    #[test]
    fn lift_identity_when_distinct() {
        let inst = line_instance();
        let r = reduce(&inst).unwrap();
        let s = ReducedCommittee { picks: vec![2, 3] };
        let lifted = lift_solution(&s, &r).unwrap();
        assert_eq!(lifted.members(), &[2, 3]);
        assert_eq!(
            social_cost(lifted.members(), inst.metric()).unwrap(),
            social_cost(&s.origins(), inst.metric()).unwrap()
        );
    }

    #[test]
    fn lift_rejects_infeasible() {
        let inst = line_instance();
        let r = reduce(&inst).unwrap();
        assert!(lift_solution(&ReducedCommittee { picks: vec![1, 3] }, &r).is_err());
        assert!(lift_solution(&ReducedCommittee { picks: vec![0] }, &r).is_err());
    }
}
