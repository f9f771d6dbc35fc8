use serde::Serialize;

use super::instance::DiscretizedInstance;
use super::nested::{best_nested_discrete, DiscreteMenu};
use super::solve::{solve_lp, LpSolution};
use crate::error::Result;
use crate::model::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Confirmed,
    NestedSuboptimal,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Confirmed => "CONFIRMED",
            Verdict::NestedSuboptimal => "NESTED_SUBOPTIMAL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub verdict: Verdict,
    pub lp_objective: f64,
    pub menu_profit: f64,
    /// `lp_objective − menu_profit`.
    pub gap: f64,
    pub tolerance: f64,
    /// Whether the LP optimum uses lotteries; reported for suboptimal verdicts.
    pub stochastic: Option<bool>,
}

/// Classifies the gap between the LP optimum and a nested-menu profit
/// computed on the same discretized instance.
pub fn compare(inst: &DiscretizedInstance, lp: &LpSolution, menu_profit: f64) -> Comparison {
    let tolerance = inst.tolerance();
    let gap = lp.objective - menu_profit;
    let verdict = if gap.abs() <= tolerance {
        Verdict::Confirmed
    } else if gap > tolerance {
        Verdict::NestedSuboptimal
    } else {
        Verdict::Inconclusive
    };
    let stochastic = (verdict == Verdict::NestedSuboptimal).then(|| !lp.is_deterministic(1e-6));
    Comparison { verdict, lp_objective: lp.objective, menu_profit, gap, tolerance, stochastic }
}

/// LP optimum, best nested menu and verdict on one discretization.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub instance: DiscretizedInstance,
    pub lp: LpSolution,
    pub nested: DiscreteMenu,
    pub comparison: Comparison,
}

pub fn verify(spec: &ProblemSpec, m: usize) -> Result<Verification> {
    let instance = DiscretizedInstance::new(spec, m)?;
    let lp = solve_lp(&instance)?;
    let nested = best_nested_discrete(&instance);
    let comparison = compare(&instance, &lp, nested.profit);
    Ok(Verification { instance, lp, nested, comparison })
}
