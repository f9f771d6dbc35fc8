//! Problem description: items, valuations, costs and the type distribution.

mod distribution;
mod spec;
pub(crate) mod validate;
mod value;

pub use distribution::TypeDistribution;
pub use spec::{load_spec, DistributionDoc, ExprDoc, ProblemSpec, SpecDocument, TermDoc};
pub use validate::{validate_assumptions, CheckKind, ValidationReport, Warning};
pub use value::{CostFunction, Term, ValueExpr, ValueFunction};
