use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::Bundle;
use crate::demand::{sales_volume, Profiles};
use crate::dominance::{build_dominance, check_union_elasticity};
use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::optimize::bisect;
use crate::EPS_Q;

/// One-based index of the smallest menu bundle containing `item`, or zero.
pub fn tier(menu: &[Bundle], item: usize) -> usize {
    let mut chain = menu.to_vec();
    chain.sort_by_key(|b| (b.len(), b.mask()));
    chain.iter().position(|b| b.contains(item)).map_or(0, |p| p + 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct RotationPoint {
    pub s: f64,
    pub menu: Vec<Bundle>,
    pub tiers: [usize; 2],
    pub size: usize,
    pub nested: bool,
    pub union_elasticity: bool,
    /// `D*` of `{1}`, `{2}` and `{1,2}`.
    pub d_star: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct RotationSweep {
    /// Zero-based item whose demand rotates.
    pub item: usize,
    pub points: Vec<RotationPoint>,
    pub premises_hold: bool,
    pub premise_failures: Vec<String>,
    pub own_tier_nondecreasing: bool,
    pub other_tier_nonincreasing: bool,
    pub size_quasi_convex: bool,
}

impl RotationSweep {
    pub fn conclusions_hold(&self) -> bool {
        self.own_tier_nondecreasing && self.other_tier_nonincreasing && self.size_quasi_convex
    }
}

fn quasi_convex(xs: &[usize]) -> bool {
    let mut rising = false;
    for w in xs.windows(2) {
        if w[1] > w[0] {
            rising = true;
        }
        if w[1] < w[0] && rising {
            return false;
        }
    }
    true
}

/// Minimal optimal menus along a parameterized two-item family, checking the
/// sales-ordered rotation premises and the tier and menu-size conclusions.
pub fn rotation_sweep<F>(family: F, s_values: &[f64], item: usize) -> Result<RotationSweep>
where
    F: Fn(f64) -> Result<ProblemSpec> + Sync,
{
    if item > 1 {
        return Err(Error::Precondition("rotating item must be 0 or 1".into()));
    }
    let points: Vec<RotationPoint> = s_values
        .par_iter()
        .map(|&s| -> Result<RotationPoint> {
            let spec = family(s)?;
            if spec.n_items() != 2 || !spec.costs().is_zero() {
                return Err(Error::Precondition("rotation sweep needs two items and zero costs".into()));
            }
            let profiles = Profiles::compute(&spec);
            let dom = build_dominance(&profiles);
            let union = check_union_elasticity(&spec);
            let menu = dom.undominated.clone();
            Ok(RotationPoint {
                s,
                tiers: [tier(&menu, 0), tier(&menu, 1)],
                size: menu.len(),
                nested: dom.nested,
                union_elasticity: union.holds,
                d_star: [profiles.d_star(Bundle(1)), profiles.d_star(Bundle(2)), profiles.d_star(Bundle(3))],
                menu,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let own = item;
    let other = 1 - item;
    let mut failures = Vec::new();
    for (a, p) in points.iter().enumerate() {
        if !p.union_elasticity {
            failures.push(format!("union elasticity fails at s = {}", p.s));
        }
        for q in &points[a + 1..] {
            let (lo, hi) = if p.s < q.s { (p, q) } else { (q, p) };
            if hi.d_star[own] > lo.d_star[own] + EPS_Q {
                failures.push(format!("D* of item {} rises from s = {} to {}", own + 1, lo.s, hi.s));
            }
            if (hi.d_star[other] - lo.d_star[other]).abs() > EPS_Q {
                failures.push(format!("D* of item {} changes from s = {} to {}", other + 1, lo.s, hi.s));
            }
            if hi.d_star[2] > lo.d_star[2] + EPS_Q {
                failures.push(format!("D* of the pair rises from s = {} to {}", lo.s, hi.s));
            }
            if lo.d_star[own] <= lo.d_star[2] + EPS_Q && hi.d_star[own] > hi.d_star[2] + EPS_Q {
                failures.push(format!("sales order of item {} and the pair reverses from s = {} to {}", own + 1, lo.s, hi.s));
            }
        }
    }
    let mut ordered: Vec<&RotationPoint> = points.iter().collect();
    ordered.sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap());
    let own_tiers: Vec<usize> = ordered.iter().map(|p| p.tiers[own]).collect();
    let other_tiers: Vec<usize> = ordered.iter().map(|p| p.tiers[other]).collect();
    let sizes: Vec<usize> = ordered.iter().map(|p| p.size).collect();
    Ok(RotationSweep {
        item,
        premises_hold: failures.is_empty(),
        premise_failures: failures,
        own_tier_nondecreasing: own_tiers.windows(2).all(|w| w[1] >= w[0]),
        other_tier_nonincreasing: other_tiers.windows(2).all(|w| w[1] <= w[0]),
        size_quasi_convex: quasi_convex(&sizes),
        points,
    })
}

/// Parameter in `[lo, hi]` where `D*(a; s) = D*(b; s)`, by bisection on the
/// sales-volume gap.
pub fn transition<F>(family: F, a: Bundle, b: Bundle, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<ProblemSpec>,
{
    let gap = |s: f64| -> Result<f64> {
        let spec = family(s)?;
        Ok(sales_volume(&spec, a).d_star - sales_volume(&spec, b).d_star)
    };
    let (ga, gb) = (gap(lo)?, gap(hi)?);
    if ga == 0.0 {
        return Ok(lo);
    }
    if gb == 0.0 {
        return Ok(hi);
    }
    if (ga > 0.0) == (gb > 0.0) {
        return Err(Error::Precondition(format!("no sign change of D*({a}) − D*({b}) on [{lo}, {hi}]")));
    }
    let err = std::cell::RefCell::new(None);
    let root = bisect(
        |s| match gap(s) {
            Ok(g) => g,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        tol,
    );
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(root),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiers_of_chains() {
        let menu = [Bundle(0b10), Bundle(0b11)];
        assert_eq!(tier(&menu, 1), 1);
        assert_eq!(tier(&menu, 0), 2);
        assert_eq!(tier(&[Bundle(0b11)], 0), 1);
    }

    #[test]
    fn quasi_convexity() {
        assert!(quasi_convex(&[2, 2, 1, 1, 2]));
        assert!(quasi_convex(&[1, 1, 1]));
        assert!(!quasi_convex(&[1, 2, 1]));
    }
}
