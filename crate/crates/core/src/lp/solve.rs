use std::collections::BTreeSet;

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};
use serde::Serialize;

use super::instance::DiscretizedInstance;
use crate::error::{Error, Result};

/// Optimal possibly stochastic mechanism on the discretized instance.
#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    pub objective: f64,
    /// `allocation[k][j]`: probability that type `k` gets bundle `j`.
    pub allocation: Vec<Vec<f64>>,
    pub payments: Vec<f64>,
    /// Incentive constraints present in the final model.
    pub ic_constraints: usize,
    pub rounds: usize,
    /// Largest violation over all `m²` incentive and `m` participation constraints.
    pub max_violation: f64,
}

const ADD_TOL: f64 = 1e-9;
const ACCEPT_TOL: f64 = 1e-7;
const MAX_ROUNDS: usize = 500;

fn lp_error(e: minilp::Error) -> Error {
    match e {
        minilp::Error::Infeasible => Error::Lp("infeasible; the zero mechanism is feasible, so the model is malformed".into()),
        minilp::Error::Unbounded => Error::Lp("unbounded; an objective sign is wrong".into()),
    }
}

impl LpSolution {
    /// Worst violation over the full incentive and participation system.
    pub fn violation(inst: &DiscretizedInstance, a: &[Vec<f64>], p: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..inst.m {
            let own = inst.utility(k, &a[k], p[k]);
            worst = worst.max(-own);
            for l in 0..inst.m {
                worst = worst.max(inst.utility(k, &a[l], p[l]) - own);
            }
        }
        worst
    }

    /// Types whose assignment is not a single bundle with certainty.
    pub fn stochastic_types(&self, tol: f64) -> Vec<usize> {
        self.allocation
            .iter()
            .enumerate()
            .filter(|(_, row)| {
                let frac = row.iter().any(|&x| x > tol && x < 1.0 - tol);
                let total: f64 = row.iter().sum();
                frac || (total > tol && total < 1.0 - tol)
            })
            .map(|(k, _)| k)
            .collect()
    }

    pub fn is_deterministic(&self, tol: f64) -> bool {
        self.stochastic_types(tol).is_empty()
    }

    /// Probability mass assigned to the bundles selected by `pick`.
    pub fn mass_on(&self, inst: &DiscretizedInstance, pick: impl Fn(usize) -> bool) -> f64 {
        self.allocation
            .iter()
            .zip(&inst.weights)
            .map(|(row, w)| w * row.iter().enumerate().filter(|(j, _)| pick(*j)).map(|(_, x)| x).sum::<f64>())
            .sum()
    }
}

fn ic_expr(inst: &DiscretizedInstance, a: &[Vec<Variable>], p: &[Variable], k: usize, l: usize) -> LinearExpr {
    let mut e = LinearExpr::empty();
    for (j, v) in inst.values[k].iter().enumerate() {
        e.add(a[k][j], *v);
        e.add(a[l][j], -*v);
    }
    e.add(p[k], -1.0);
    e.add(p[l], 1.0);
    e
}

/// Solves the mechanism LP with the full set of incentive constraints.
///
/// The model starts from participation, feasibility and adjacent incentive
/// constraints; the solution is then checked against all `m²` incentive
/// constraints and violated ones are added and re-solved from the previous
/// basis until none remain, which yields the optimum of the full program.
pub fn solve_lp(inst: &DiscretizedInstance) -> Result<LpSolution> {
    let m = inst.m;
    let nb = inst.bundles.len();
    if nb == 0 {
        return Ok(LpSolution {
            objective: 0.0,
            allocation: vec![Vec::new(); m],
            payments: vec![0.0; m],
            ic_constraints: 0,
            rounds: 0,
            max_violation: 0.0,
        });
    }
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let a: Vec<Vec<Variable>> = (0..m)
        .map(|k| (0..nb).map(|j| problem.add_var(-inst.weights[k] * inst.costs[j], (0.0, 1.0))).collect())
        .collect();
    let p: Vec<Variable> = (0..m).map(|k| problem.add_var(inst.weights[k], (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for k in 0..m {
        problem.add_constraint(a[k].iter().map(|&v| (v, 1.0)), ComparisonOp::Le, 1.0);
        let mut ir = LinearExpr::empty();
        for (&var, &v) in a[k].iter().zip(&inst.values[k]) {
            ir.add(var, v);
        }
        ir.add(p[k], -1.0);
        problem.add_constraint(ir, ComparisonOp::Ge, 0.0);
    }
    let mut present: BTreeSet<(usize, usize)> = BTreeSet::new();
    for k in 0..m {
        for l in [k.wrapping_sub(1), k + 1] {
            if l < m {
                problem.add_constraint(ic_expr(inst, &a, &p, k, l), ComparisonOp::Ge, 0.0);
                present.insert((k, l));
            }
        }
    }
    let mut sol = problem.solve().map_err(lp_error)?;
    let mut rounds = 1;
    loop {
        let av: Vec<Vec<f64>> = a.iter().map(|row| row.iter().map(|&v| *sol.var_value(v)).collect()).collect();
        let pv: Vec<f64> = p.iter().map(|&v| *sol.var_value(v)).collect();
        let mut added = 0;
        let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
        for k in 0..m {
            let own = inst.utility(k, &av[k], pv[k]);
            let mut worst: Option<(f64, usize)> = None;
            for l in 0..m {
                if l == k || present.contains(&(k, l)) {
                    continue;
                }
                let gain = inst.utility(k, &av[l], pv[l]) - own;
                if gain > ADD_TOL && worst.is_none_or(|w| gain > w.0) {
                    worst = Some((gain, l));
                }
            }
            if let Some((g, l)) = worst {
                candidates.push((g, k, l));
            }
        }
        for (_, k, l) in candidates {
            sol = sol.add_constraint(ic_expr(inst, &a, &p, k, l), ComparisonOp::Ge, 0.0).map_err(lp_error)?;
            present.insert((k, l));
            added += 1;
        }
        if added == 0 || rounds >= MAX_ROUNDS {
            let max_violation = LpSolution::violation(inst, &av, &pv);
            if max_violation > ACCEPT_TOL {
                return Err(Error::Lp(format!("constraint generation stopped with violation {max_violation:e}")));
            }
            return Ok(LpSolution {
                objective: sol.objective(),
                allocation: av,
                payments: pv,
                ic_constraints: present.len(),
                rounds,
                max_violation,
            });
        }
        rounds += 1;
    }
}
