//! Demand curves, profit curves, sales volumes and price elasticities.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::menu::virtual_surplus;
use crate::model::ProblemSpec;
use crate::optimize;

const SCAN_POINTS: usize = 1001;
const GOLDEN_TOL: f64 = 1e-10;
const CORNER_TOL: f64 = 1e-9;

fn check_q(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::QuantityRange(q))
    }
}

/// Inverse demand `P(b, q) = v(b, F⁻¹(1 − q))`.
pub fn demand_price(spec: &ProblemSpec, b: Bundle, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(price_unchecked(spec, b, q))
}

pub(crate) fn price_unchecked(spec: &ProblemSpec, b: Bundle, q: f64) -> f64 {
    spec.v(b, spec.distribution().quantile(1.0 - q))
}

/// `π(b, q) = (P(b, q) − C(b))·q`.
pub fn profit_curve(spec: &ProblemSpec, b: Bundle, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(profit_unchecked(spec, b, q))
}

pub(crate) fn profit_unchecked(spec: &ProblemSpec, b: Bundle, q: f64) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    (price_unchecked(spec, b, q) - spec.cost(b)) * q
}

/// Marginal revenue net of cost, `dπ/dq`, which equals the virtual surplus
/// of the marginal type `F⁻¹(1 − q)`.
pub fn marginal_revenue(spec: &ProblemSpec, b: Bundle, q: f64) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    virtual_surplus(spec, b, spec.distribution().quantile(1.0 - q))
}

/// Optimal standalone sales volume of one bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SalesVolume {
    pub bundle: Bundle,
    pub d_star: f64,
    /// Marginal type `F⁻¹(1 − D*)`.
    pub t_star: f64,
    pub peak_profit: f64,
    /// Several separated grid maxima tie; the smallest quantity is kept.
    pub multiple_peaks: bool,
    /// `D*` sits at 0 or 1.
    pub corner: bool,
}

/// `argmax_q π(b, q)` by a coarse scan, golden-section refinement and a
/// marginal-revenue bisection inside the final bracket.
pub fn sales_volume(spec: &ProblemSpec, b: Bundle) -> SalesVolume {
    let f = |q: f64| profit_unchecked(spec, b, q);
    let g = |q: f64| marginal_revenue(spec, b, q);
    let m = optimize::maximize(f, Some(&g), 0.0, 1.0, SCAN_POINTS, GOLDEN_TOL);
    let d_star = if m.tied_grid_maxima {
        m.peaks
            .iter()
            .filter(|p| p.value >= m.value - 1e-12 * m.value.abs().max(1.0))
            .map(|p| p.x)
            .fold(m.x, f64::min)
    } else {
        m.x
    };
    let d_star = d_star.clamp(0.0, 1.0);
    SalesVolume {
        bundle: b,
        d_star,
        t_star: spec.distribution().quantile(1.0 - d_star),
        peak_profit: f(d_star),
        multiple_peaks: m.tied_grid_maxima && !spec.values().expr(b).is_zero(),
        corner: !(CORNER_TOL..=1.0 - CORNER_TOL).contains(&d_star),
    }
}

fn price_slope(spec: &ProblemSpec, b: Bundle, q: f64) -> f64 {
    let h = (1e-4 * q).max(1e-6);
    let lo = (q - h).max(0.0);
    let hi = (q + h).min(1.0);
    (price_unchecked(spec, b, hi) - price_unchecked(spec, b, lo)) / (hi - lo)
}

fn ratio(num: f64, q: f64, slope: f64) -> f64 {
    if slope == 0.0 {
        return f64::NEG_INFINITY;
    }
    num / (q * slope)
}

/// Price elasticity `P / (q · dP/dq)`; `−∞` when `q = 0`, `P ≤ 0` or the
/// demand curve is locally flat.
pub fn elasticity(spec: &ProblemSpec, b: Bundle, q: f64) -> Result<f64> {
    check_q(q)?;
    let p = price_unchecked(spec, b, q);
    if q <= 0.0 || p <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(ratio(p, q, price_slope(spec, b, q)))
}

/// Elasticity of the margin `P − C(b)`.
pub fn cost_adjusted_elasticity(spec: &ProblemSpec, b: Bundle, q: f64) -> Result<f64> {
    check_q(q)?;
    let p = price_unchecked(spec, b, q);
    let cost = spec.cost(b);
    if p <= cost {
        return Err(Error::Unsellable { bundle: b, q, price: p, cost });
    }
    if q <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(ratio(p - cost, q, price_slope(spec, b, q)))
}

/// Sales volumes of every active bundle.
#[derive(Debug, Clone, Serialize)]
pub struct Profiles {
    volumes: BTreeMap<Bundle, SalesVolume>,
}

impl Profiles {
    pub fn compute(spec: &ProblemSpec) -> Profiles {
        let list: Vec<SalesVolume> = spec.active().par_iter().map(|&b| sales_volume(spec, b)).collect();
        Profiles { volumes: list.into_iter().map(|s| (s.bundle, s)).collect() }
    }

    pub fn get(&self, b: Bundle) -> Option<&SalesVolume> {
        self.volumes.get(&b)
    }

    /// `D*(b)`; the empty bundle sells to everyone.
    pub fn d_star(&self, b: Bundle) -> f64 {
        if b.is_empty() {
            return 1.0;
        }
        self.volumes.get(&b).map_or(0.0, |s| s.d_star)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SalesVolume> {
        self.volumes.values()
    }

    pub fn bundles(&self) -> impl Iterator<Item = Bundle> + '_ {
        self.volumes.keys().copied()
    }
}

/// Demand, profit and elasticities of one bundle on the quantity grid.
#[derive(Debug, Clone, Serialize)]
pub struct DemandProfile {
    pub bundle: Bundle,
    pub q_grid: Vec<f64>,
    pub price: Vec<f64>,
    pub profit: Vec<f64>,
    pub eta: Vec<f64>,
    /// `None` where the bundle cannot be sold above cost.
    pub eta_tilde: Vec<Option<f64>>,
    pub d_star: f64,
    pub t_star: f64,
    pub peak_profit: f64,
}

impl DemandProfile {
    pub fn compute(spec: &ProblemSpec, b: Bundle) -> DemandProfile {
        let q_grid = spec.q_grid();
        let price = q_grid.iter().map(|&q| price_unchecked(spec, b, q)).collect();
        let profit = q_grid.iter().map(|&q| profit_unchecked(spec, b, q)).collect();
        let eta = q_grid.iter().map(|&q| elasticity(spec, b, q).unwrap_or(f64::NAN)).collect();
        let eta_tilde = q_grid.iter().map(|&q| cost_adjusted_elasticity(spec, b, q).ok()).collect();
        let sv = sales_volume(spec, b);
        DemandProfile {
            bundle: b,
            q_grid,
            price,
            profit,
            eta,
            eta_tilde,
            d_star: sv.d_star,
            t_star: sv.t_star,
            peak_profit: sv.peak_profit,
        }
    }
}
