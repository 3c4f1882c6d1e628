//! One solver run on a base instance, with optional ground-truth checks.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::brute::{opt_fair_kcenter, BruteForceLimits};
use crate::error::{Error, Result};
use crate::five::solve_five;
use crate::greedy::CoverMode;
use crate::instance::{reduce, social_cost, Committee, FairInstance};
use crate::metric::QueryOracle;
use crate::three::{solve_three, solve_three_with};

/// Float allowance on distortion bounds.
pub const DISTORTION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Three,
    Five,
    /// The three-solver's prefix selection over an exact farthest-first cover.
    GonzalezMatched,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Three,
        Algorithm::Five,
        Algorithm::GonzalezMatched,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Three => "three",
            Algorithm::Five => "five",
            Algorithm::GonzalezMatched => "gonzalez-matched",
        }
    }

    /// Proven approximation factor.
    pub fn distortion_bound(self) -> f64 {
        match self {
            Algorithm::Three | Algorithm::GonzalezMatched => 3.0,
            Algorithm::Five => 5.0,
        }
    }

    /// Distinct-pair budget: `2k²`, or `C·k·(⌈log₂k⌉+1)²` for five.
    pub fn query_bound(self, k: usize, c: f64) -> f64 {
        match self {
            Algorithm::Three | Algorithm::GonzalezMatched => (2 * k * k) as f64,
            Algorithm::Five => c * five_scale(k),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn ceil_log2(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

/// `k·(⌈log₂k⌉+1)²`.
pub fn five_scale(k: usize) -> f64 {
    let l = f64::from(ceil_log2(k) + 1);
    k as f64 * l * l
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub solve_ms: f64,
    pub verify_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algo: Algorithm,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub committee: Option<Committee>,
    pub achieved_cost: Option<f64>,
    pub opt_cost: Option<f64>,
    pub distortion: Option<f64>,
    pub queries_distinct: usize,
    pub queries_calls: u64,
    pub chosen_ell: Option<usize>,
    pub lambda_at_ell: Option<f64>,
    /// `queries_distinct / (k·(⌈log₂k⌉+1)²)`, the constant the five-solver
    /// budget hides.
    pub measured_c: f64,
    pub predicate_evaluations: Option<usize>,
    pub find_lambda_calls: Option<usize>,
    pub timings: Timings,
    pub error: Option<String>,
}

impl RunReport {
    pub fn completed(&self) -> bool {
        self.error.is_none()
    }

    pub fn within_query_bound(&self, c: f64) -> bool {
        self.queries_distinct as f64 <= self.algo.query_bound(self.k, c)
    }

    /// `None` when no optimum is known.
    pub fn within_distortion_bound(&self) -> Option<bool> {
        let (a, o) = (self.achieved_cost?, self.opt_cost?);
        Some(a <= (self.algo.distortion_bound() + DISTORTION_SLACK) * o)
    }
}

/// `achieved / opt`; 1 when both are zero, infinite when only `opt` is.
pub fn distortion(achieved: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        achieved / opt
    } else if achieved == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

struct Solved {
    committee: Committee,
    chosen_ell: usize,
    lambda: f64,
    predicate_evaluations: Option<usize>,
    find_lambda_calls: Option<usize>,
}

fn solve(algo: Algorithm, inst: &FairInstance, oracle: &mut QueryOracle<'_>) -> Result<Solved> {
    let r = reduce(inst)?;
    Ok(match algo {
        Algorithm::Three | Algorithm::GonzalezMatched => {
            let s = if algo == Algorithm::Three {
                solve_three(&r, oracle)?
            } else {
                solve_three_with(&r, oracle, CoverMode::Exact)?
            };
            Solved {
                committee: s.committee,
                chosen_ell: s.chosen_ell,
                lambda: s.lambda,
                predicate_evaluations: None,
                find_lambda_calls: None,
            }
        }
        Algorithm::Five => {
            let s = solve_five(&r, oracle)?;
            Solved {
                committee: s.committee,
                chosen_ell: s.hat_ell,
                lambda: s.lambda,
                predicate_evaluations: Some(s.diagnostics.search.predicate_evaluations),
                find_lambda_calls: Some(s.diagnostics.lambda_searches.len()),
            }
        }
    })
}

/// Runs `algo` on `inst`. Solver errors land in the report instead of
/// propagating. With `verify`, the optimum is computed when the instance
/// fits the limits.
pub fn run_algorithm(
    algo: Algorithm,
    inst: &FairInstance,
    budget: Option<usize>,
    verify: Option<BruteForceLimits>,
) -> RunReport {
    let mut oracle = match budget {
        Some(b) => QueryOracle::with_budget(inst.metric(), b),
        None => QueryOracle::new(inst.metric()),
    };
    let started = Instant::now();
    let solved = solve(algo, inst, &mut oracle);
    let solve_ms = started.elapsed().as_secs_f64() * 1e3;
    let snap = oracle.ledger().snapshot();
    let mut report = RunReport {
        algo,
        n: inst.n(),
        k: inst.k(),
        t: inst.groups().len(),
        committee: None,
        achieved_cost: None,
        opt_cost: None,
        distortion: None,
        queries_distinct: snap.distinct,
        queries_calls: snap.calls,
        chosen_ell: None,
        lambda_at_ell: None,
        measured_c: snap.distinct as f64 / five_scale(inst.k()),
        predicate_evaluations: None,
        find_lambda_calls: None,
        timings: Timings {
            solve_ms,
            verify_ms: None,
        },
        error: None,
    };
    let s = match solved {
        Ok(s) => s,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    match social_cost(s.committee.members(), inst.metric()) {
        Ok(c) => report.achieved_cost = Some(c),
        Err(e) => report.error = Some(e.to_string()),
    }
    report.chosen_ell = Some(s.chosen_ell);
    report.lambda_at_ell = Some(s.lambda);
    report.predicate_evaluations = s.predicate_evaluations;
    report.find_lambda_calls = s.find_lambda_calls;
    report.committee = Some(s.committee);

    if let Some(limits) = verify.filter(|l| l.admits(inst.n(), inst.k())) {
        let started = Instant::now();
        match opt_fair_kcenter(inst, limits) {
            Ok(cert) => {
                report.opt_cost = Some(cert.opt_cost);
                report.distortion = report.achieved_cost.map(|a| distortion(a, cert.opt_cost));
            }
            Err(e) => report.error = Some(e.to_string()),
        }
        report.timings.verify_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    report
}
