//! Optimal bundling when consumers differ along a single type dimension.
//!
//! The crate computes single-bundle demand objects, the dominance partial
//! order over bundles, the optimal nested menu together with its prices, and
//! an independent discretized mechanism LP used to certify the results.

pub mod applications;
pub mod bundle;
pub mod demand;
pub mod dominance;
pub mod error;
pub mod families;
pub mod lp;
pub mod menu;
pub mod model;
pub mod optimize;
pub mod quadrature;

pub use bundle::Bundle;
pub use demand::{Profiles, SalesVolume};
pub use dominance::DominanceRelation;
pub use error::{Error, Result};
pub use menu::{MechanismSolution, NestedMenu};
pub use model::{CostFunction, ProblemSpec, Term, TypeDistribution, ValidationReport, ValueExpr};

/// Tie tolerance on sales-volume comparisons.
pub const EPS_Q: f64 = 1e-7;

/// Default number of points on the shared type and quantity grids.
pub const DEFAULT_GRID: usize = 4097;
