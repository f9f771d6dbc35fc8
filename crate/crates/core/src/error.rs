use crate::bundle::Bundle;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("schema: {0}")]
    Schema(String),

    #[error("v(∅, t) must vanish, found {value} at t = {t}")]
    EmptyBundleValue { t: f64, value: f64 },

    #[error("negative cost {cost} for bundle {bundle}")]
    NegativeCost { bundle: Bundle, cost: f64 },

    #[error("value not monotone in set inclusion: v({small}, {t}) = {v_small} > v({large}, {t}) = {v_large}")]
    NotMonotoneInclusion {
        small: Bundle,
        large: Bundle,
        t: f64,
        v_small: f64,
        v_large: f64,
    },

    #[error("value of {bundle} decreases in t between {t0} and {t1}")]
    NotIncreasingInType { bundle: Bundle, t0: f64, t1: f64 },

    #[error("efficiency at the top fails: {bundle} has surplus {surplus} > {grand_surplus} of the grand bundle")]
    EfficiencyAtTop {
        bundle: Bundle,
        surplus: f64,
        grand_surplus: f64,
    },

    #[error("quantity {0} outside [0, 1]")]
    QuantityRange(f64),

    #[error("price {price} does not exceed cost {cost} for {bundle} at q = {q}")]
    Unsellable {
        bundle: Bundle,
        q: f64,
        price: f64,
        cost: f64,
    },

    #[error("undominated bundles are not nested")]
    NotNested,

    #[error("menu is not a chain under set inclusion")]
    NotChain,

    #[error("union elasticity condition has not been verified")]
    UnionElasticityUnverified,

    #[error("incremental profit of {bundle} has two peaks of nearly equal height at q = {q1} and q = {q2}")]
    AmbiguousPeak { bundle: Bundle, q1: f64, q2: f64 },

    #[error("allocation not monotone in set inclusion at t = {t}")]
    NonMonotoneAllocation { t: f64 },

    #[error("precondition: {0}")]
    Precondition(String),

    #[error("linear program: {0}")]
    Lp(String),

    #[error("internal assertion: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Schema(_) => "schema",
            Error::EmptyBundleValue { .. } => "empty_bundle_value",
            Error::NegativeCost { .. } => "negative_cost",
            Error::NotMonotoneInclusion { .. } => "not_monotone_inclusion",
            Error::NotIncreasingInType { .. } => "not_increasing_in_type",
            Error::EfficiencyAtTop { .. } => "efficiency_at_top",
            Error::QuantityRange(_) => "quantity_range",
            Error::Unsellable { .. } => "unsellable",
            Error::NotNested => "not_nested",
            Error::NotChain => "not_chain",
            Error::UnionElasticityUnverified => "union_elasticity_unverified",
            Error::AmbiguousPeak { .. } => "ambiguous_peak",
            Error::NonMonotoneAllocation { .. } => "non_monotone_allocation",
            Error::Precondition(_) => "precondition",
            Error::Lp(_) => "lp",
            Error::Internal(_) => "internal",
        }
    }

    /// True for failures of the input problem rather than of the solver.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Schema(_)
                | Error::EmptyBundleValue { .. }
                | Error::NegativeCost { .. }
                | Error::NotMonotoneInclusion { .. }
                | Error::NotIncreasingInType { .. }
                | Error::EfficiencyAtTop { .. }
                | Error::QuantityRange(_)
                | Error::Precondition(_)
        )
    }
}
