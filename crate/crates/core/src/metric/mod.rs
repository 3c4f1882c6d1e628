//! Metric spaces, the ordinal profiles they induce, and metered distance
//! access.

mod generate;
mod oracle;
mod profile;
mod space;

pub use generate::{
    balanced_groups, default_requirements, generate, generate_instance, shortest_path_closure,
    Generated, GeneratorConfig, MetricKind, MAX_DEFAULT_LINE_POINTS,
};
pub use oracle::{LedgerSnapshot, QueryLedger, QueryOracle};
pub use profile::OrdinalProfile;
pub use space::{MetricSpace, TriangleViolation, SYMMETRY_TOLERANCE, TRIANGLE_TOLERANCE};
