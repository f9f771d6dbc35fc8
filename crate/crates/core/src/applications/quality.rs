use serde::Serialize;

use crate::bundle::Bundle;
use crate::demand::Profiles;
use crate::dominance::build_dominance;
use crate::error::{Error, Result};
use crate::menu::{minimal_menu, optimize_menu};
use crate::model::{ProblemSpec, TypeDistribution, ValueExpr};
use crate::optimize::bisect;
use crate::EPS_Q;

const PROFIT_TOL: f64 = 1e-6;

/// Vertically differentiated qualities `x_1 < … < x_n`.
#[derive(Debug, Clone)]
pub struct QualityProblem {
    pub qualities: Vec<f64>,
    pub values: Vec<ValueExpr>,
    pub costs: Vec<f64>,
    pub distribution: TypeDistribution,
    pub grid_size: usize,
    /// Values are `x · t`.
    pub multiplicative: bool,
}

impl QualityProblem {
    /// `v(x, t) = x·t`.
    pub fn multiplicative(qualities: Vec<f64>, costs: Vec<f64>, distribution: TypeDistribution, grid_size: usize) -> Self {
        let values = qualities.iter().map(|&x| ValueExpr::monomials(&[(x, 1.0)])).collect();
        QualityProblem { qualities, values, costs, distribution, grid_size, multiplicative: true }
    }

    fn check(&self) -> Result<()> {
        let n = self.qualities.len();
        if n == 0 || self.values.len() != n || self.costs.len() != n {
            return Err(Error::Schema("qualities, values and costs must have equal nonzero length".into()));
        }
        if !self.qualities.windows(2).all(|w| w[0] < w[1]) || self.qualities[0] <= 0.0 {
            return Err(Error::Schema("qualities must be positive and strictly increasing".into()));
        }
        Ok(())
    }

    /// Bundle `{1, …, k}` carries quality `x_k`; every other bundle is padding.
    pub fn chain_bundle(k: usize) -> Bundle {
        Bundle(((1u64 << (k + 1)) - 1) as u32)
    }

    pub fn embed(&self) -> Result<ProblemSpec> {
        self.check()?;
        let entries: Vec<(Bundle, ValueExpr, f64)> = (0..self.qualities.len())
            .map(|k| (Self::chain_bundle(k), self.values[k].clone(), self.costs[k]))
            .collect();
        ProblemSpec::from_bundles(self.qualities.len(), &entries, self.distribution.clone(), self.grid_size)
    }

    pub fn average_costs(&self) -> Vec<f64> {
        self.qualities.iter().zip(&self.costs).map(|(x, c)| c / x).collect()
    }
}

/// Running maximum from the right: the least nonincreasing majorant.
pub fn upper_decreasing_envelope(values: &[f64]) -> Vec<f64> {
    let mut out = values.to_vec();
    for k in (0..out.len().saturating_sub(1)).rev() {
        out[k] = out[k].max(out[k + 1]);
    }
    out
}

/// Running minimum from the right: the greatest nondecreasing minorant.
pub fn lower_increasing_envelope(values: &[f64]) -> Vec<f64> {
    let mut out = values.to_vec();
    for k in (0..out.len().saturating_sub(1)).rev() {
        out[k] = out[k].min(out[k + 1]);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeResult {
    pub qualities: Vec<f64>,
    pub d_star: Vec<f64>,
    pub d_hat: Vec<f64>,
    pub c_avg: Vec<f64>,
    pub c_check: Vec<f64>,
    /// Indices (zero-based) of qualities where the envelope touches.
    pub x_star: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DhatResult {
    pub envelope: EnvelopeResult,
    /// Qualities sold by the stack construction on the embedded bundles.
    pub menu_qualities: Vec<usize>,
    /// Profit of selling every quality in `x_star`.
    pub x_star_profit: f64,
    /// The sold qualities lie in `x_star` and selling all of `x_star` earns
    /// the same profit. `x_star` can be larger than the minimal menu.
    pub agrees_with_menu: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CcheckResult {
    pub envelope: EnvelopeResult,
    /// `max_x |D̂*(x) − MR⁻¹(Č_avg(x))|`.
    pub identity_error: f64,
}

fn touches(a: &[f64], b: &[f64]) -> Vec<usize> {
    (0..a.len()).filter(|&k| (a[k] - b[k]).abs() <= EPS_Q).collect()
}

fn envelopes(problem: &QualityProblem, profiles: &Profiles, by_cost: bool) -> EnvelopeResult {
    let d_star: Vec<f64> = (0..problem.qualities.len()).map(|k| profiles.d_star(QualityProblem::chain_bundle(k))).collect();
    let d_hat = upper_decreasing_envelope(&d_star);
    let c_avg = problem.average_costs();
    let c_check = lower_increasing_envelope(&c_avg);
    let x_star = if by_cost { touches(&c_avg, &c_check) } else { touches(&d_star, &d_hat) };
    EnvelopeResult { qualities: problem.qualities.clone(), d_star, d_hat, c_avg, c_check, x_star }
}

/// Qualities on the upper decreasing envelope of the sales volumes,
/// cross-checked against the stack construction on the bundle embedding.
pub fn quality_menu_via_dhat(problem: &QualityProblem) -> Result<DhatResult> {
    let spec = problem.embed()?;
    let profiles = Profiles::compute(&spec);
    let envelope = envelopes(problem, &profiles, false);
    if let Some(k) = envelope.d_star.iter().position(|&d| d <= 0.0 || d >= 1.0) {
        return Err(Error::Precondition(format!("D*(x_{}) = {} is not interior", k + 1, envelope.d_star[k])));
    }
    let dominance = build_dominance(&profiles);
    let menu = minimal_menu(&spec, &profiles, &dominance)?;
    let menu_qualities: Vec<usize> = menu.bundles().iter().map(|b| b.len() - 1).collect();
    let x_star_bundles: Vec<Bundle> = envelope.x_star.iter().map(|&k| QualityProblem::chain_bundle(k)).collect();
    let x_star_profit = optimize_menu(&spec, &x_star_bundles)?.profit;
    let agrees_with_menu = menu_qualities.iter().all(|k| envelope.x_star.contains(k))
        && (x_star_profit - menu.profit).abs() <= PROFIT_TOL * (1.0 + menu.profit.abs());
    Ok(DhatResult { envelope, menu_qualities, x_star_profit, agrees_with_menu })
}

/// Quantity solving `t − (1−F(t))/f(t) = c` at the marginal type, i.e. the
/// inverse of the unit-quality marginal revenue curve.
pub fn inverse_marginal_revenue(dist: &TypeDistribution, c: f64) -> f64 {
    let phi = |t: f64| t - dist.hazard(t);
    let (lo, hi) = (dist.lo(), dist.hi());
    if c <= phi(lo) {
        return 1.0;
    }
    if c >= phi(hi) {
        return 0.0;
    }
    let t = bisect(|t| phi(t) - c, lo, hi, 1e-15 * (hi - lo).max(1.0));
    1.0 - dist.cdf(t)
}

fn regular(spec: &ProblemSpec) -> bool {
    let dist = spec.distribution();
    let grid = spec.t_grid();
    grid.windows(2).all(|w| (w[1] - dist.hazard(w[1])) - (w[0] - dist.hazard(w[0])) > -1e-10)
}

/// Qualities on the lower increasing envelope of average costs, for values
/// `x·t` and a regular type distribution.
pub fn quality_menu_via_ccheck(problem: &QualityProblem) -> Result<CcheckResult> {
    if !problem.multiplicative {
        return Err(Error::Precondition("average-cost route needs values x·t".into()));
    }
    let spec = problem.embed()?;
    if !regular(&spec) {
        return Err(Error::Precondition("type distribution is not regular".into()));
    }
    let profiles = Profiles::compute(&spec);
    let envelope = envelopes(problem, &profiles, true);
    let identity_error = envelope
        .d_hat
        .iter()
        .zip(&envelope.c_check)
        .map(|(&d, &c)| (d - inverse_marginal_revenue(spec.distribution(), c)).abs())
        .fold(0.0, f64::max);
    Ok(CcheckResult { envelope, identity_error })
}
