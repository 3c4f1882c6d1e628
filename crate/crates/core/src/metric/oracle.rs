use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::PointId;

/// Accounting for one solver run: which unordered pairs have been revealed,
/// how many times the oracle was asked, and an optional cap on distinct pairs.
#[derive(Debug, Clone, Default)]
pub struct QueryLedger {
    pairs: HashSet<(u32, u32)>,
    calls: u64,
    budget: Option<usize>,
}

/// Counters copied out of a [`QueryLedger`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub distinct: usize,
    pub calls: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: usize) -> Self {
        Self {
            budget: Some(budget),
            ..Self::default()
        }
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn distinct(&self) -> usize {
        self.pairs.len()
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            distinct: self.distinct(),
            calls: self.calls,
        }
    }

    pub fn contains(&self, u: PointId, v: PointId) -> bool {
        self.pairs.contains(&key(u, v))
    }

    /// Records one call for `{u, v}`. A new pair beyond the budget is
    /// rejected and leaves the ledger untouched.
    fn charge(&mut self, u: PointId, v: PointId) -> Result<()> {
        let k = key(u, v);
        if !self.pairs.contains(&k) {
            if let Some(budget) = self.budget {
                if self.pairs.len() >= budget {
                    return Err(Error::BudgetExhausted { budget });
                }
            }
            self.pairs.insert(k);
        }
        self.calls += 1;
        Ok(())
    }
}

fn key(u: PointId, v: PointId) -> (u32, u32) {
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    (a as u32, b as u32)
}

/// The only way a solver learns a cardinal distance.
///
/// Self-pairs answer 0 without touching the ledger. Every other pair is
/// charged once on first sight; repeats are answered from the ledger and
/// only bump the call counter.
#[derive(Debug)]
pub struct QueryOracle<'m> {
    metric: &'m MetricSpace,
    ledger: QueryLedger,
}

impl<'m> QueryOracle<'m> {
    pub fn new(metric: &'m MetricSpace) -> Self {
        Self::with_ledger(metric, QueryLedger::new())
    }

    pub fn with_budget(metric: &'m MetricSpace, budget: usize) -> Self {
        Self::with_ledger(metric, QueryLedger::with_budget(budget))
    }

    pub fn with_ledger(metric: &'m MetricSpace, ledger: QueryLedger) -> Self {
        Self { metric, ledger }
    }

    pub fn n(&self) -> usize {
        self.metric.len()
    }

    pub fn query(&mut self, u: PointId, v: PointId) -> Result<f64> {
        let n = self.metric.len();
        if u >= n {
            return Err(Error::InvalidPoint(u));
        }
        if v >= n {
            return Err(Error::InvalidPoint(v));
        }
        if u == v {
            return Ok(0.0);
        }
        self.ledger.charge(u, v)?;
        Ok(self.metric.dist(u, v))
    }

    /// The distance if it has already been revealed (or `u == v`); free.
    pub fn known(&self, u: PointId, v: PointId) -> Option<f64> {
        if u == v {
            Some(0.0)
        } else if self.ledger.contains(u, v) {
            Some(self.metric.dist(u, v))
        } else {
            None
        }
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }

    pub fn distinct(&self) -> usize {
        self.ledger.distinct()
    }
}
