//! The dominance order: set inclusion combined with standalone sales volumes.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::bundle::Bundle;
use crate::demand::{cost_adjusted_elasticity, elasticity, Profiles};
use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::EPS_Q;

/// `b1 ⪯ b2` iff `b1 ⊆ b2` and `D*(b1) ≤ D*(b2)` (within `EPS_Q`).
#[derive(Debug, Clone, Serialize)]
pub struct DominanceRelation {
    pub active: Vec<Bundle>,
    pub d_star: BTreeMap<Bundle, f64>,
    /// All related pairs including the reflexive ones.
    pub pairs: Vec<(Bundle, Bundle)>,
    /// Maximal elements, ordered by size then mask.
    pub undominated: Vec<Bundle>,
    pub nested: bool,
    pub best_selling: Option<Bundle>,
    /// Another bundle ties the best seller's sales volume.
    pub best_selling_tie: bool,
    pub sales_order: Vec<Bundle>,
    /// Bundles whose sales volume is a corner solution.
    pub corners: Vec<Bundle>,
}

fn weakly_below(d1: f64, d2: f64) -> bool {
    d1 <= d2 + EPS_Q
}

/// Bundles sorted by sales volume, largest first, ties to the smaller mask.
pub fn sales_order(profiles: &Profiles) -> Vec<Bundle> {
    let mut order: Vec<Bundle> = profiles.bundles().collect();
    order.sort_by(|a, b| {
        profiles.d_star(*b).partial_cmp(&profiles.d_star(*a)).unwrap().then(a.cmp(b))
    });
    order
}

pub fn build_dominance(profiles: &Profiles) -> DominanceRelation {
    let active: Vec<Bundle> = profiles.bundles().collect();
    let d_star: BTreeMap<Bundle, f64> = active.iter().map(|&b| (b, profiles.d_star(b))).collect();
    let mut pairs = Vec::new();
    for &b1 in &active {
        for &b2 in &active {
            if b1.is_subset(b2) && weakly_below(d_star[&b1], d_star[&b2]) {
                pairs.push((b1, b2));
            }
        }
    }
    let mut undominated: Vec<Bundle> = active
        .iter()
        .copied()
        .filter(|&b| !pairs.iter().any(|&(x, y)| x == b && y != b))
        .collect();
    undominated.sort_by_key(|b| (b.len(), b.mask()));
    let nested = undominated.windows(2).all(|w| w[0].is_proper_subset(w[1]));
    let order = sales_order(profiles);
    let best_selling = order.iter().copied().find(|b| undominated.contains(b));
    let best_selling_tie = best_selling.is_some_and(|b| {
        order.iter().any(|&o| o != b && (d_star[&o] - d_star[&b]).abs() <= EPS_Q)
    });
    let corners = profiles.iter().filter(|s| s.corner).map(|s| s.bundle).collect();
    DominanceRelation { active, d_star, pairs, undominated, nested, best_selling, best_selling_tie, sales_order: order, corners }
}

impl DominanceRelation {
    pub fn precedes(&self, b1: Bundle, b2: Bundle) -> bool {
        self.pairs.contains(&(b1, b2))
    }

    pub fn is_undominated(&self, b: Bundle) -> bool {
        self.undominated.contains(&b)
    }

    /// Covering pairs of the strict order.
    pub fn covers(&self) -> Vec<(Bundle, Bundle)> {
        self.pairs
            .iter()
            .copied()
            .filter(|&(a, b)| a != b)
            .filter(|&(a, b)| {
                !self.active.iter().any(|&c| c != a && c != b && self.precedes(a, c) && self.precedes(c, b))
            })
            .collect()
    }

    /// Hasse diagram in Graphviz DOT, edges pointing up the order.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dominance {\n  rankdir=BT;\n  node [shape=box];\n");
        for &b in &self.active {
            let style = if self.is_undominated(b) { ", style=bold, peripheries=2" } else { "" };
            let _ = writeln!(s, "  \"{}\" [label=\"{}\\nD*={:.6}\"{}];", b.label(), b, self.d_star[&b], style);
        }
        for (a, b) in self.covers() {
            let _ = writeln!(s, "  \"{}\" -> \"{}\";", a.label(), b.label());
        }
        s.push_str("}\n");
        s
    }
}

/// A quantity where two elastic demands have an inelastic union.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnionFlag {
    pub b1: Bundle,
    pub b2: Bundle,
    pub q: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub eta_union: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnionElasticityReport {
    pub holds: bool,
    pub cost_adjusted: bool,
    /// First offending quantity of each failing pair.
    pub flags: Vec<UnionFlag>,
}

const ELASTIC_TOL: f64 = 1e-6;

/// Scans every pair of active bundles on the interior quantity grid. With
/// nonzero costs the margin elasticity is used, and quantities at which a
/// bundle cannot be sold above cost count as elastic.
pub fn check_union_elasticity(spec: &ProblemSpec) -> UnionElasticityReport {
    let cost_adjusted = !spec.costs().is_zero();
    let q_grid: Vec<f64> = spec.q_grid().into_iter().filter(|&q| q > 0.0 && q < 1.0).collect();
    let mut masks: Vec<Bundle> = spec.active().to_vec();
    for &a in spec.active() {
        for &b in spec.active() {
            masks.push(a.union(b));
        }
    }
    masks.sort();
    masks.dedup();
    let eta_of = |b: Bundle, q: f64| -> f64 {
        if cost_adjusted {
            cost_adjusted_elasticity(spec, b, q).unwrap_or(f64::NEG_INFINITY)
        } else {
            elasticity(spec, b, q).unwrap_or(f64::NEG_INFINITY)
        }
    };
    let table: BTreeMap<Bundle, Vec<f64>> =
        masks.iter().map(|&b| (b, q_grid.iter().map(|&q| eta_of(b, q)).collect())).collect();
    let elastic = |e: f64| e < -1.0 - ELASTIC_TOL;
    let inelastic = |e: f64| e > -1.0 + ELASTIC_TOL;
    let active = spec.active();
    let mut flags = Vec::new();
    for (i, &b1) in active.iter().enumerate() {
        for &b2 in &active[i + 1..] {
            let u = b1.union(b2);
            let (e1, e2, eu) = (&table[&b1], &table[&b2], &table[&u]);
            if let Some(k) = (0..q_grid.len()).find(|&k| elastic(e1[k]) && elastic(e2[k]) && inelastic(eu[k])) {
                flags.push(UnionFlag { b1, b2, q: q_grid[k], eta1: e1[k], eta2: e2[k], eta_union: eu[k] });
            }
        }
    }
    UnionElasticityReport { holds: flags.is_empty(), cost_adjusted, flags }
}

/// Chain of cumulative unions of the bundles in sales order.
pub fn elasticity_menu(profiles: &Profiles, report: &UnionElasticityReport) -> Result<Vec<Bundle>> {
    if !report.holds {
        return Err(Error::UnionElasticityUnverified);
    }
    let mut chain: Vec<Bundle> = Vec::new();
    let mut acc = Bundle::EMPTY;
    for b in sales_order(profiles) {
        acc = acc.union(b);
        if chain.last() != Some(&acc) {
            chain.push(acc);
        }
    }
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// A smaller menu bundle fails to outsell a larger one.
    MenuOrder,
    /// An excluded bundle is not dominated by a larger menu bundle.
    ExcludedDominated,
    /// An excluded bundle outsells every nonempty menu bundle.
    ExcludedOutsold,
    /// The smallest menu bundle is not the best seller.
    SmallestIsBestSeller,
    /// The grand bundle is not the least-selling menu bundle.
    GrandIsLeastSelling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub condition: Condition,
    pub bundle: Bundle,
}

#[derive(Debug, Clone, Serialize)]
pub struct MenuCharacterization {
    /// The sufficient conditions hold: the menu is optimal.
    pub sufficient: bool,
    pub witness: Option<Witness>,
    /// The converse conditions required of a minimally optimal menu.
    pub converse_holds: bool,
    pub converse_witness: Option<Witness>,
    /// Smallest bundle is the best seller and the grand bundle is the least
    /// selling member.
    pub extremal_holds: bool,
    pub extremal_witness: Option<Witness>,
}

impl MenuCharacterization {
    /// Every necessary condition for minimal optimality holds.
    pub fn necessary(&self) -> bool {
        self.converse_holds && self.extremal_holds
    }
}

/// Checks the sales-volume characterization of an optimal nested menu.
pub fn characterize_menu(spec: &ProblemSpec, profiles: &Profiles, menu: &[Bundle]) -> Result<MenuCharacterization> {
    let mut chain = menu.to_vec();
    chain.sort_by_key(|b| (b.len(), b.mask()));
    chain.dedup();
    if chain.is_empty() || chain.iter().any(|b| b.is_empty()) || !chain.windows(2).all(|w| w[0].is_proper_subset(w[1])) {
        return Err(Error::NotChain);
    }
    let d = |b: Bundle| profiles.d_star(b);
    let mut order_witness = None;
    'outer: for (i, &b1) in chain.iter().enumerate() {
        for &b2 in &chain[i + 1..] {
            if d(b1) <= d(b2) + EPS_Q {
                order_witness = Some(Witness { condition: Condition::MenuOrder, bundle: b1 });
                break 'outer;
            }
        }
    }
    let excluded: Vec<Bundle> = spec.active().iter().copied().filter(|b| !chain.contains(b)).collect();
    let undominated_out = excluded
        .iter()
        .copied()
        .find(|&b1| !chain.iter().any(|&b2| b1.is_proper_subset(b2) && weakly_below(d(b1), d(b2))))
        .map(|bundle| Witness { condition: Condition::ExcludedDominated, bundle });
    let outsold = excluded
        .iter()
        .copied()
        .find(|&b1| !chain.iter().any(|&b2| weakly_below(d(b1), d(b2))))
        .map(|bundle| Witness { condition: Condition::ExcludedOutsold, bundle });

    let best = sales_order(profiles).first().copied();
    let grand = spec.grand();
    let extremal_witness = if best.is_some_and(|b| b != chain[0]) {
        Some(Witness { condition: Condition::SmallestIsBestSeller, bundle: chain[0] })
    } else if *chain.last().unwrap() != grand || chain.iter().any(|&b| b != grand && d(b) < d(grand) - EPS_Q) {
        Some(Witness { condition: Condition::GrandIsLeastSelling, bundle: *chain.last().unwrap() })
    } else {
        None
    };

    let witness = order_witness.or(undominated_out);
    let converse_witness = order_witness.or(outsold);
    Ok(MenuCharacterization {
        sufficient: witness.is_none(),
        witness,
        converse_holds: converse_witness.is_none(),
        converse_witness,
        extremal_holds: extremal_witness.is_none(),
        extremal_witness,
    })
}
