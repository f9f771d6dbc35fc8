use log::warn;
use serde::Serialize;

use super::{telescoping_prices, upgrade_prices, virtual_surplus};
use crate::bundle::Bundle;
use crate::demand::{profit_unchecked, Profiles};
use crate::dominance::DominanceRelation;
use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::optimize;
use crate::EPS_Q;

const SCAN_POINTS: usize = 1001;
const PEAK_TIE: f64 = 1e-8;
const PRICE_AGREEMENT: f64 = 1e-8;

/// One tier of a nested menu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tier {
    pub bundle: Bundle,
    /// Mass of consumers buying this tier or a larger one.
    pub quantity: f64,
    /// Lowest type buying this tier or a larger one.
    pub cutoff: f64,
    pub price: f64,
    /// Price increment over the tier below.
    pub upgrade_price: f64,
}

/// Minimal optimal nested menu with quantities and prices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestedMenu {
    pub tiers: Vec<Tier>,
    pub profit: f64,
    /// An incremental profit had more than one local peak; the optimality
    /// guarantee does not apply.
    pub peak_warnings: Vec<Bundle>,
}

impl NestedMenu {
    pub fn bundles(&self) -> Vec<Bundle> {
        self.tiers.iter().map(|t| t.bundle).collect()
    }

    pub fn options(&self) -> Vec<(Bundle, f64)> {
        self.tiers.iter().map(|t| (t.bundle, t.price)).collect()
    }

    pub fn certificate_valid(&self) -> bool {
        self.peak_warnings.is_empty()
    }

    /// Builds a priced chain from its quantities, checking both price formulas.
    pub fn from_quantities(spec: &ProblemSpec, chain: &[(Bundle, f64)]) -> Result<NestedMenu> {
        let bundles: Vec<Bundle> = chain.iter().map(|c| c.0).collect();
        let cutoffs: Vec<f64> = chain.iter().map(|c| spec.distribution().quantile(1.0 - c.1)).collect();
        let (upgrades, prices) = upgrade_prices(spec, &bundles, &cutoffs);
        let telescoped = telescoping_prices(spec, &bundles, &cutoffs);
        for (p, q) in prices.iter().zip(&telescoped) {
            if (p - q).abs() > PRICE_AGREEMENT * p.abs().max(1.0) {
                return Err(Error::Internal(format!("upgrade price {p} and telescoping price {q} disagree")));
            }
        }
        let mut profit = 0.0;
        let mut tiers = Vec::with_capacity(chain.len());
        for j in 0..chain.len() {
            let next_q = chain.get(j + 1).map_or(0.0, |c| c.1);
            profit += (chain[j].1 - next_q) * (prices[j] - spec.cost(bundles[j]));
            tiers.push(Tier {
                bundle: bundles[j],
                quantity: chain[j].1,
                cutoff: cutoffs[j],
                price: prices[j],
                upgrade_price: upgrades[j],
            });
        }
        Ok(NestedMenu { tiers, profit, peak_warnings: Vec::new() })
    }
}

/// Stack construction of the minimal optimal menu over the undominated
/// chain, starting from the empty bundle with quantity one.
pub fn minimal_menu(spec: &ProblemSpec, profiles: &Profiles, dominance: &DominanceRelation) -> Result<NestedMenu> {
    if !dominance.nested {
        return Err(Error::NotNested);
    }
    let mut chain = dominance.undominated.clone();
    chain.sort_by_key(|b| (b.len(), b.mask()));
    let mut stack: Vec<(Bundle, f64)> = vec![(Bundle::EMPTY, 1.0)];
    let mut peak_warnings = Vec::new();
    let mut i = 0;
    while i < chain.len() {
        let b = chain[i];
        let Some(&(top, q_top)) = stack.last() else {
            stack.push((b, profiles.d_star(b)));
            i += 1;
            continue;
        };
        let q_star = if top.is_empty() {
            profiles.d_star(b)
        } else {
            let f = |q: f64| profit_unchecked(spec, b, q) - profit_unchecked(spec, top, q);
            let g = |q: f64| {
                let t = spec.distribution().quantile(1.0 - q);
                virtual_surplus(spec, b, t) - virtual_surplus(spec, top, t)
            };
            let m = optimize::maximize(f, Some(&g), 0.0, q_top, SCAN_POINTS, 1e-10);
            if !m.is_single_peaked() {
                let (p1, p2) = (m.peaks[0], m.peaks[1]);
                if (p1.value - p2.value).abs() <= PEAK_TIE && (p1.x - p2.x).abs() > EPS_Q {
                    return Err(Error::AmbiguousPeak { bundle: b, q1: p1.x, q2: p2.x });
                }
                warn!("incremental profit of {b} over {top} has {} local peaks; using the highest", m.peaks.len());
                peak_warnings.push(b);
            }
            m.x
        };
        if q_star >= q_top - EPS_Q {
            stack.pop();
        } else if q_star <= EPS_Q {
            i += 1;
        } else {
            stack.push((b, q_star));
            i += 1;
        }
    }
    let tiers: Vec<(Bundle, f64)> = stack.into_iter().filter(|(b, _)| !b.is_empty()).collect();
    let mut menu = NestedMenu::from_quantities(spec, &tiers)?;
    menu.peak_warnings = peak_warnings;
    Ok(menu)
}
