//! Fair k-center with ordinal preferences and a metered distance oracle.
//!
//! Every point ranks all others closest-first; exact distances are only
//! available through a [`QueryOracle`] that counts distinct pairs. The two
//! solvers, [`solve_three`] and [`solve_five`], trade query volume against
//! approximation ratio.

pub mod brute;
pub mod error;
pub mod five;
pub mod greedy;
pub mod instance;
pub mod io;
pub mod metric;
pub mod projection;
pub mod report;
pub mod three;

pub type PointId = usize;

pub use error::{Error, Result};
pub use five::{solve_five, FiveDiagnostics, FiveSolution};
pub use greedy::{build_cover, CoverMode, OrderedCover};
pub use instance::{lift_solution, reduce, social_cost, Committee, FairInstance};
pub use metric::{MetricSpace, OrdinalProfile, QueryLedger, QueryOracle};
pub use three::{solve_three, ThreeSolution};
