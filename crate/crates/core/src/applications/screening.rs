use serde::Serialize;

use crate::bundle::Bundle;
use crate::demand::{profit_unchecked, sales_volume};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, DiscretizedInstance};
use crate::model::validate::single_peaked;
use crate::model::{ProblemSpec, TypeDistribution, ValueExpr};
use crate::EPS_Q;

/// Qualities priced alongside costly actions whose disutility rises with type.
#[derive(Debug, Clone)]
pub struct ScreeningProblem {
    pub qualities: Vec<f64>,
    /// `u(x_i, ·)`.
    pub utilities: Vec<ValueExpr>,
    pub costs: Vec<f64>,
    /// `c(y_j, ·)`.
    pub disutilities: Vec<ValueExpr>,
    pub distribution: TypeDistribution,
    pub grid_size: usize,
}

/// Limit on qualities plus actions for the bundle embedding.
pub const MAX_EMBEDDED_ITEMS: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct ScreeningResult {
    pub d_star_x: Vec<f64>,
    pub d_star_y: Vec<f64>,
    /// Largest index among the best-selling qualities.
    pub x_star: usize,
    /// Smallest index among the least-selling opt-out rights.
    pub y_star: usize,
    /// Pairs `(i, j)` with positive surplus for some type.
    pub surplus_set: Vec<(usize, usize)>,
    /// `None` when an assumption fails and the criterion does not apply.
    pub optimal: Option<bool>,
    /// Costly screening is optimal because some admissible pair has a net
    /// value decreasing in type.
    pub decreasing_net_value: bool,
    pub assumption_failures: Vec<String>,
    /// Ties in the extremal sales volumes.
    pub ties: bool,
}

impl ScreeningProblem {
    /// One quality `x = 1` valued `t` at zero cost, and one action with
    /// disutility `k·t^e`, on `U[0, 1]`.
    pub fn power(k: f64, e: f64, grid_size: usize) -> ScreeningProblem {
        ScreeningProblem {
            qualities: vec![1.0],
            utilities: vec![ValueExpr::monomials(&[(1.0, 1.0)])],
            costs: vec![0.0],
            disutilities: vec![ValueExpr::monomials(&[(k, e)])],
            distribution: TypeDistribution::uniform(0.0, 1.0),
            grid_size,
        }
    }

    fn grid(&self) -> Vec<f64> {
        self.distribution.type_grid(self.grid_size)
    }

    fn check(&self) -> Result<()> {
        let (n, m) = (self.qualities.len(), self.disutilities.len());
        if n == 0 || m == 0 || self.utilities.len() != n || self.costs.len() != n {
            return Err(Error::Schema("screening problem needs qualities with utilities and costs, and actions".into()));
        }
        self.distribution.check()?;
        let grid = self.grid();
        for (j, c) in self.disutilities.iter().enumerate() {
            if grid.windows(2).any(|w| c.eval(w[1]) - c.eval(w[0]) <= 0.0) {
                return Err(Error::Precondition(format!(
                    "disutility of action {} is not strictly increasing in type; with nonincreasing disutility the optimal deterministic mechanism never uses costly actions",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    fn single(&self, v: &ValueExpr, cost: f64) -> Result<ProblemSpec> {
        ProblemSpec::from_bundles(1, &[(Bundle(1), v.clone(), cost)], self.distribution.clone(), self.grid_size)
    }

    fn net(&self, i: usize, j: usize) -> ValueExpr {
        self.utilities[i].plus(&self.disutilities[j].scaled(-1.0))
    }

    /// Pairs that generate positive surplus for some grid type.
    pub fn surplus_set(&self) -> Vec<(usize, usize)> {
        let grid = self.grid();
        let mut out = Vec::new();
        for i in 0..self.qualities.len() {
            for j in 0..self.disutilities.len() {
                let net = self.net(i, j);
                if grid.iter().any(|&t| net.eval(t) - self.costs[i] > 0.0) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn quality_mask(i: usize) -> u32 {
        ((1u64 << (i + 1)) - 1) as u32
    }

    fn action_mask(&self) -> u32 {
        let (n, m) = (self.qualities.len(), self.disutilities.len());
        (((1u64 << m) - 1) << n) as u32
    }

    /// Bundle of quality `i` with the right to opt out of every action.
    pub fn undamaged_bundle(&self, i: usize) -> Bundle {
        Bundle(Self::quality_mask(i) | self.action_mask())
    }

    /// Bundle of quality `i` that requires action `j`.
    pub fn damaged_bundle(&self, i: usize, j: usize) -> Bundle {
        let n = self.qualities.len();
        Bundle(Self::quality_mask(i) | (self.action_mask() & !(1 << (n + j))))
    }

    /// Bundling problem on `n + m` items: quality upgrades followed by
    /// opt-out rights, with damaged goods only for surplus-positive pairs.
    pub fn embed(&self, include_damaged: bool) -> Result<ProblemSpec> {
        self.check()?;
        let (n, m) = (self.qualities.len(), self.disutilities.len());
        if n + m > MAX_EMBEDDED_ITEMS {
            return Err(Error::Precondition(format!("{} items exceed the embedding limit {MAX_EMBEDDED_ITEMS}", n + m)));
        }
        let mut entries: Vec<(Bundle, ValueExpr, f64)> =
            (0..n).map(|i| (self.undamaged_bundle(i), self.utilities[i].clone(), self.costs[i])).collect();
        if include_damaged {
            for (i, j) in self.surplus_set() {
                entries.push((self.damaged_bundle(i, j), self.net(i, j), self.costs[i]));
            }
        }
        ProblemSpec::from_bundles(n + m, &entries, self.distribution.clone(), self.grid_size)
    }
}

/// Decides whether requiring a costly action is part of every optimal
/// deterministic mechanism: it is iff the least-selling opt-out right sells
/// less than the best-selling quality.
pub fn screening_optimal(problem: &ScreeningProblem) -> Result<ScreeningResult> {
    problem.check()?;
    let (n, m) = (problem.qualities.len(), problem.disutilities.len());
    let grid = problem.grid();
    let mut failures = Vec::new();

    let mut d_star_x = Vec::with_capacity(n);
    let mut x_specs = Vec::with_capacity(n);
    for i in 0..n {
        let spec = problem.single(&problem.utilities[i], problem.costs[i])?;
        let sv = sales_volume(&spec, Bundle(1));
        if !spec.validation().profit_single_peaked {
            failures.push(format!("π(x_{}, ·) is not single-peaked", i + 1));
        }
        if sv.d_star >= 1.0 - 1e-12 {
            failures.push(format!("D*(x_{}) = 1", i + 1));
        }
        d_star_x.push(sv.d_star);
        x_specs.push(spec);
    }
    let mut d_star_y = Vec::with_capacity(m);
    let mut y_specs = Vec::with_capacity(m);
    for j in 0..m {
        let spec = problem.single(&problem.disutilities[j], 0.0)?;
        if !spec.validation().profit_single_peaked {
            failures.push(format!("π(y_{}, ·) is not single-peaked", j + 1));
        }
        d_star_y.push(sales_volume(&spec, Bundle(1)).d_star);
        y_specs.push(spec);
    }

    let max_x = d_star_x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_y = d_star_y.iter().copied().fold(f64::INFINITY, f64::min);
    let x_star = (0..n).rev().find(|&i| d_star_x[i] >= max_x - EPS_Q).unwrap();
    let y_star = (0..m).find(|&j| d_star_y[j] <= min_y + EPS_Q).unwrap();
    let ties = (0..n).filter(|&i| d_star_x[i] >= max_x - EPS_Q).count() > 1
        || (0..m).filter(|&j| d_star_y[j] <= min_y + EPS_Q).count() > 1
        || (min_y - max_x).abs() <= EPS_Q;

    let surplus_set = problem.surplus_set();
    let decreasing_net_value = surplus_set.iter().any(|&(i, j)| {
        let net = problem.net(i, j);
        grid.windows(2).all(|w| net.eval(w[1]) < net.eval(w[0]))
    });
    if decreasing_net_value {
        return Ok(ScreeningResult {
            d_star_x,
            d_star_y,
            x_star,
            y_star,
            surplus_set,
            optimal: Some(true),
            decreasing_net_value,
            assumption_failures: failures,
            ties,
        });
    }

    let mut pairs = surplus_set.clone();
    if !pairs.contains(&(x_star, y_star)) {
        pairs.push((x_star, y_star));
    }
    let q_grid: Vec<f64> = (0..problem.grid_size).map(|k| k as f64 / (problem.grid_size - 1) as f64).collect();
    for &(i, j) in &pairs {
        let net = problem.net(i, j);
        let rising = grid.windows(2).all(|w| net.eval(w[1]) <= 0.0 || net.eval(w[1]) - net.eval(w[0]) > -1e-10);
        if !rising {
            failures.push(format!("net value u(x_{}) − c(y_{}) is not increasing where positive", i + 1, j + 1));
        }
        // Only quantities whose marginal type gains from the pair matter.
        let dist = &problem.distribution;
        let diff: Vec<f64> = q_grid
            .iter()
            .filter(|&&q| q == 0.0 || net.eval(dist.quantile(1.0 - q)) - problem.costs[i] > 0.0)
            .map(|&q| profit_unchecked(&x_specs[i], Bundle(1), q) - profit_unchecked(&y_specs[j], Bundle(1), q))
            .collect();
        if !single_peaked(&diff) {
            failures.push(format!("π(x_{}, ·) − π(y_{}, ·) is not single-peaked", i + 1, j + 1));
        }
    }

    let optimal = failures.is_empty().then_some(min_y < max_x - EPS_Q);
    Ok(ScreeningResult {
        d_star_x,
        d_star_y,
        x_star,
        y_star,
        surplus_set,
        optimal,
        decreasing_net_value,
        assumption_failures: failures,
        ties,
    })
}

/// LP cross-check on the bundle embedding.
#[derive(Debug, Clone, Serialize)]
pub struct ScreeningLp {
    pub m: usize,
    pub objective: f64,
    /// Objective when damaged goods are removed from the embedding.
    pub quality_only_objective: f64,
    /// Probability mass of damaged goods in the LP optimum.
    pub damaged_mass: f64,
    /// Damaged goods carry more than `5/m` of mass.
    pub uses_costly_action: bool,
}

pub fn screening_lp_check(problem: &ScreeningProblem, m: usize) -> Result<ScreeningLp> {
    let spec = problem.embed(true)?;
    let inst = DiscretizedInstance::new(&spec, m)?;
    let lp = solve_lp(&inst)?;
    let damaged: Vec<Bundle> = problem.surplus_set().iter().map(|&(i, j)| problem.damaged_bundle(i, j)).collect();
    let damaged_mass = lp.mass_on(&inst, |k| damaged.contains(&inst.bundles[k]));
    let plain = DiscretizedInstance::new(&problem.embed(false)?, m)?;
    let quality_only_objective = solve_lp(&plain)?.objective;
    Ok(ScreeningLp {
        m,
        objective: lp.objective,
        quality_only_objective,
        damaged_mass,
        uses_costly_action: damaged_mass > inst.tolerance(),
    })
}
