use crate::metric::MetricSpace;
use crate::PointId;

/// Closest-first rankings of all points, one per point, consistent with a
/// metric.
///
/// `rank_v` sorts by `(d(v,·), id)` except that `v` itself always comes
/// first. Positions are stored alongside so "which of these is earliest in
/// `rank_v`" is a constant-time comparison per candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalProfile {
    n: usize,
    rank: Vec<u32>,
    pos: Vec<u32>,
}

impl OrdinalProfile {
    pub fn derive(m: &MetricSpace) -> Self {
        let n = m.len();
        let mut rank = Vec::with_capacity(n * n);
        let mut pos = vec![0u32; n * n];
        let mut order: Vec<u32> = Vec::with_capacity(n);
        for v in 0..n {
            let row = m.row(v);
            order.clear();
            order.extend((0..n as u32).filter(|&u| u as usize != v));
            order.sort_by(|&a, &b| row[a as usize].total_cmp(&row[b as usize]).then(a.cmp(&b)));
            rank.push(v as u32);
            rank.extend_from_slice(&order);
            let base = v * n;
            for (i, &u) in rank[base..base + n].iter().enumerate() {
                pos[base + u as usize] = i as u32;
            }
        }
        Self { n, rank, pos }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `rank_v`, closest first.
    pub fn ranking(&self, v: PointId) -> &[u32] {
        &self.rank[v * self.n..(v + 1) * self.n]
    }

    /// Index of `u` in `rank_v`.
    #[inline]
    pub fn position(&self, v: PointId, u: PointId) -> usize {
        self.pos[v * self.n + u] as usize
    }

    /// The member of `candidates` that `v` ranks closest, or `None` if empty.
    pub fn earliest<I>(&self, v: PointId, candidates: I) -> Option<PointId>
    where
        I: IntoIterator<Item = PointId>,
    {
        candidates.into_iter().min_by_key(|&u| self.position(v, u))
    }

    /// The member of `candidates` that `v` ranks farthest, or `None` if empty.
    pub fn latest<I>(&self, v: PointId, candidates: I) -> Option<PointId>
    where
        I: IntoIterator<Item = PointId>,
    {
        candidates.into_iter().max_by_key(|&u| self.position(v, u))
    }

    /// Checks consistency with `m`: along every ranking distances never
    /// decrease.
    pub fn is_consistent_with(&self, m: &MetricSpace) -> bool {
        m.len() == self.n
            && (0..self.n).all(|v| {
                let r = self.ranking(v);
                r.first().is_some_and(|&f| f as usize == v)
                    && r.windows(2)
                        .all(|w| m.dist(v, w[0] as usize) <= m.dist(v, w[1] as usize))
            })
    }
}
