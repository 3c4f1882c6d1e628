use crate::error::{Error, Result};
use crate::PointId;

/// Largest tolerated `|d(u,v) - d(v,u)|` when building from a table.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Relative slack allowed by [`MetricSpace::validate`].
pub const TRIANGLE_TOLERANCE: f64 = 1e-9;

/// A finite metric space over dense point ids `0..n`, stored as a full
/// row-major distance table.
///
/// Solvers never read this directly; they go through a
/// [`QueryOracle`](crate::QueryOracle) so that every revealed distance is
/// metered. Ground-truth evaluation ([`crate::instance::social_cost`], the
/// brute-force module) reads it freely.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<f64>,
}

/// A triple `(u, v, w)` with `d(u,w) > d(u,v) + d(v,w)` beyond tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleViolation {
    pub u: PointId,
    pub v: PointId,
    pub w: PointId,
    /// `d(u,w) - (d(u,v) + d(v,w))`, positive.
    pub slack: f64,
}

impl MetricSpace {
    /// Wraps a square distance table.
    ///
    /// The table must be square with a zero diagonal, finite nonnegative
    /// entries and symmetric up to [`SYMMETRY_TOLERANCE`]. Entries are
    /// symmetrized by taking the upper triangle, so later reads are
    /// bit-identical in both directions. The triangle inequality is *not*
    /// checked here, see [`MetricSpace::validate`].
    pub fn from_table(table: &[Vec<f64>]) -> Result<Self> {
        let n = table.len();
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
        }
        let mut dist = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                let x = table[u][v];
                if !x.is_finite() {
                    return Err(Error::NonFinite { u, v });
                }
                if x < 0.0 {
                    return Err(Error::NegativeDistance { u, v, value: x });
                }
                if u == v && x != 0.0 {
                    return Err(Error::NonzeroDiagonal { u, value: x });
                }
                let y = table[v][u];
                if (x - y).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::Asymmetric {
                        u,
                        v,
                        forward: x,
                        backward: y,
                    });
                }
                dist[u * n + v] = if u <= v { x } else { y };
            }
        }
        Ok(Self { n, dist })
    }

    /// Euclidean distances between coordinate vectors of equal dimension.
    pub fn from_points(coords: &[Vec<f64>]) -> Result<Self> {
        let n = coords.len();
        if let Some(dim) = coords.first().map(Vec::len) {
            if let Some(bad) = coords.iter().position(|c| c.len() != dim) {
                return Err(Error::Format(format!(
                    "point {bad} has dimension {}, expected {dim}",
                    coords[bad].len()
                )));
            }
        }
        if let Some((u, _)) = coords
            .iter()
            .enumerate()
            .find(|(_, c)| c.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::NonFinite { u, v: u });
        }
        let mut dist = vec![0.0; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                let d = coords[u]
                    .iter()
                    .zip(&coords[v])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                dist[u * n + v] = d;
                dist[v * n + u] = d;
            }
        }
        Ok(Self { n, dist })
    }

    /// Points on the real line at the given positions.
    pub fn from_line(positions: &[f64]) -> Result<Self> {
        let coords: Vec<Vec<f64>> = positions.iter().map(|&x| vec![x]).collect();
        Self::from_points(&coords)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, u: PointId, v: PointId) -> f64 {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: PointId) -> &[f64] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn to_table(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|u| self.row(u).to_vec()).collect()
    }

    /// Distance from `u` to the nearest member of `set` (infinite if empty).
    pub fn dist_to_set(&self, u: PointId, set: &[PointId]) -> f64 {
        set.iter()
            .map(|&c| self.dist(u, c))
            .fold(f64::INFINITY, f64::min)
    }

    /// Lists every triple violating the triangle inequality by more than
    /// [`TRIANGLE_TOLERANCE`] (relative to `d(u,v) + d(v,w)`, floored at 1).
    pub fn validate(&self) -> Vec<TriangleViolation> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                let uv = self.dist(u, v);
                for w in 0..self.n {
                    let bound = uv + self.dist(v, w);
                    let slack = self.dist(u, w) - bound;
                    if slack > TRIANGLE_TOLERANCE * bound.max(1.0) {
                        out.push(TriangleViolation { u, v, w, slack });
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_fixture() -> MetricSpace {
        MetricSpace::from_line(&[0.0, 1.0, 3.0]).unwrap()
    }

    #[test]
    fn single_point() {
        let m = MetricSpace::from_table(&[vec![0.0]]).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.dist(0, 0), 0.0);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn line_distances() {
        let m = line_fixture();
        assert_eq!(m.dist(0, 2), 3.0);
        assert_eq!(m.dist(2, 1), 2.0);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn rejects_negative_entry() {
        let t = vec![vec![0.0, -0.5], vec![-0.5, 0.0]];
        assert!(matches!(
            MetricSpace::from_table(&t),
            Err(Error::NegativeDistance { .. })
        ));
    }

    #[test]
    fn rejects_ragged_and_asymmetric_tables() {
        let ragged = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(
            MetricSpace::from_table(&ragged),
            Err(Error::NotSquare { row: 1, .. })
        ));
        let asym = vec![vec![0.0, 1.0], vec![1.5, 0.0]];
        assert!(matches!(
            MetricSpace::from_table(&asym),
            Err(Error::Asymmetric { .. })
        ));
        let diag = vec![vec![0.1]];
        assert!(matches!(
            MetricSpace::from_table(&diag),
            Err(Error::NonzeroDiagonal { .. })
        ));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let t = vec![vec![0.0, 1.0], vec![1.0 + 1e-13, 0.0]];
        let m = MetricSpace::from_table(&t).unwrap();
        assert_eq!(m.dist(0, 1).to_bits(), m.dist(1, 0).to_bits());
    }

    #[test]
    fn reports_violated_triple() {
        let t = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let m = MetricSpace::from_table(&t).unwrap();
        let bad = m.validate();
        assert!(bad.contains(&TriangleViolation {
            u: 0,
            v: 1,
            w: 2,
            slack: 3.0
        }));
        // (a,b,c) and its mirror (c,b,a) are the only violations.
        assert_eq!(bad.len(), 2);
    }
}
