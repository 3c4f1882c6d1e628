use thiserror::Error;

use crate::PointId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("distance table is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("distance table has a non-finite entry at ({u}, {v})")]
    NonFinite { u: PointId, v: PointId },
    #[error("negative distance {value} at ({u}, {v})")]
    NegativeDistance { u: PointId, v: PointId, value: f64 },
    #[error("nonzero self-distance {value} at point {u}")]
    NonzeroDiagonal { u: PointId, value: f64 },
    #[error("asymmetric distances at ({u}, {v}): {forward} vs {backward}")]
    Asymmetric {
        u: PointId,
        v: PointId,
        forward: f64,
        backward: f64,
    },
    #[error("point id {0} is out of range")]
    InvalidPoint(PointId),
    #[error("query budget of {budget} distinct pairs exhausted")]
    BudgetExhausted { budget: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("requirements sum to {sum}, which exceeds k = {k}")]
    RequirementsExceedK { sum: usize, k: usize },
    #[error("k = {k} exceeds the number of points n = {n}")]
    KExceedsN { k: usize, n: usize },
    #[error("committee is not feasible: {0}")]
    InfeasibleCommittee(String),
    #[error("committee is empty")]
    EmptyCommittee,
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("matching is not left-perfect")]
    NotLeftPerfect,
    #[error("no candidate threshold admits a left-perfect matching")]
    NoFeasibleLambda,
    #[error("prefix length {ell} is outside 1..={k}")]
    InvalidPrefix { ell: usize, k: usize },
    #[error("exhaustive search too large: n = {n}, k = {k} (limits n <= {max_n}, k <= {max_k})")]
    BruteForceTooLarge {
        n: usize,
        k: usize,
        max_n: usize,
        max_k: usize,
    },
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("instance file: {0}")]
    Format(String),
}
