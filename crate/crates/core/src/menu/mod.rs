//! Virtual surplus, the nested-menu construction and mechanism evaluation.

mod algorithm;
mod mechanism;
mod surplus;

pub use algorithm::{minimal_menu, NestedMenu, Tier};
pub use mechanism::{
    best_nested_menu, chains, envelope_allocation, evaluate_menu, optimize_menu, relaxed_bound, IcReport,
    IcViolation, MechanismSolution, MenuOptimum, MenuOption,
};
pub use surplus::{last_crossing, virtual_surplus, CrossingRecord};

use crate::bundle::Bundle;
use crate::model::ProblemSpec;

/// Prices of a chain sold at the given cutoff types: each tier's upgrade
/// price leaves the cutoff type indifferent to the tier below. Returns
/// `(upgrade prices, cumulative prices)`.
pub(crate) fn upgrade_prices(spec: &ProblemSpec, chain: &[Bundle], cutoffs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut upgrades = Vec::with_capacity(chain.len());
    let mut prices = Vec::with_capacity(chain.len());
    let mut prev = Bundle::EMPTY;
    let mut total = 0.0;
    for (&b, &s) in chain.iter().zip(cutoffs) {
        let up = spec.v(b, s) - spec.v(prev, s);
        total += up;
        upgrades.push(up);
        prices.push(total);
        prev = b;
    }
    (upgrades, prices)
}

/// The telescoping price formula
/// `p(b_j) = v(b_j, s_j) − Σ_{i<j} (v(b_i, s_{i+1}) − v(b_i, s_i))`.
pub(crate) fn telescoping_prices(spec: &ProblemSpec, chain: &[Bundle], cutoffs: &[f64]) -> Vec<f64> {
    (0..chain.len())
        .map(|j| {
            let rent: f64 = (0..j).map(|i| spec.v(chain[i], cutoffs[i + 1]) - spec.v(chain[i], cutoffs[i])).sum();
            spec.v(chain[j], cutoffs[j]) - rent
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::{demand_price, profit_curve, Profiles};
    use crate::dominance::build_dominance;
    use crate::families::power_pair;
    use crate::model::{TypeDistribution, ValueExpr};

    const A: Bundle = Bundle(0b01);
    const B: Bundle = Bundle(0b10);
    const AB: Bundle = Bundle(0b11);

    fn solve(spec: &ProblemSpec) -> NestedMenu {
        let profiles = Profiles::compute(spec);
        minimal_menu(spec, &profiles, &build_dominance(&profiles)).unwrap()
    }

    fn monopoly() -> ProblemSpec {
        ProblemSpec::from_bundles(1, &[(Bundle(1), ValueExpr::monomials(&[(1.0, 1.0)]), 0.0)], TypeDistribution::uniform(0.0, 1.0), 1025)
            .unwrap()
    }

    #[test]
    fn single_item_monopoly() {
        let spec = monopoly();
        let menu = solve(&spec);
        assert_eq!(menu.bundles(), vec![Bundle(1)]);
        let t = menu.tiers[0];
        assert!((t.quantity - 0.5).abs() < 1e-9);
        assert!((t.price - 0.5).abs() < 1e-9);
        assert!((menu.profit - 0.25).abs() < 1e-9);
        assert!((relaxed_bound(&spec) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn two_tier_menu() {
        let spec = power_pair(0.3, 0.5, 2049).unwrap();
        let menu = solve(&spec);
        assert_eq!(menu.bundles(), vec![B, AB]);
        assert!(menu.certificate_valid());
        assert!(menu.tiers[0].price < menu.tiers[1].price);
        assert!(menu.tiers.iter().all(|t| t.upgrade_price > 0.0));
        let sim = evaluate_menu(&spec, &menu.options());
        assert!((sim.profit - menu.profit).abs() < 1e-6);
        assert!(sim.check_ic_ir(&spec, 1e-9).holds());
        assert!(sim.revenue_equivalence_gap() < 1e-6);
        // Each grid type buys the tier its cutoff assigns, up to one cell.
        let h = spec.t_grid()[1] - spec.t_grid()[0];
        for seg in sim.segments.iter().filter(|s| !s.bundle.is_empty()) {
            let tier = menu.tiers.iter().find(|t| t.bundle == seg.bundle).unwrap();
            assert!((seg.lo - tier.cutoff).abs() <= h);
        }
    }

    #[test]
    fn pure_bundling_at_symmetric_parameters() {
        let spec = power_pair(1.0, 0.5, 2049).unwrap();
        let menu = solve(&spec);
        assert_eq!(menu.bundles(), vec![AB]);
        let d = Profiles::compute(&spec).d_star(AB);
        assert!((menu.tiers[0].quantity - d).abs() < 1e-9);
        assert!((menu.tiers[0].price - demand_price(&spec, AB, d).unwrap()).abs() < 1e-9);
        assert!((relaxed_bound(&spec) - menu.profit).abs() < 1e-6);
    }

    #[test]
    fn envelope_matches_menu() {
        for beta in [0.3, 1.0, 1.8] {
            let spec = power_pair(beta, 0.5, 2049).unwrap();
            let profiles = Profiles::compute(&spec);
            let dom = build_dominance(&profiles);
            let menu = minimal_menu(&spec, &profiles, &dom).unwrap();
            let env = envelope_allocation(&spec, &dom).unwrap();
            assert!((env.profit - menu.profit).abs() < 1e-6, "beta={beta}");
            assert_eq!(env.options.iter().map(|o| o.bundle).collect::<Vec<_>>(), menu.bundles());
        }
        let spec = power_pair(0.3, 0.5, 2049).unwrap();
        let dom = build_dominance(&Profiles::compute(&spec));
        let env = envelope_allocation(&spec, &dom).unwrap();
        let first = env.allocation.iter().position(|b| *b == B).unwrap();
        let second = env.allocation.iter().position(|b| *b == AB).unwrap();
        assert!(env.allocation[..first].iter().all(|b| b.is_empty()));
        assert!(first < second && env.allocation[second..].iter().all(|b| *b == AB));
    }

    #[test]
    fn relaxed_bound_exceeds_nested_menus_without_nesting() {
        let spec = power_pair(0.5, 4.5, 2049).unwrap();
        let nested = best_nested_menu(&spec).unwrap();
        assert!(relaxed_bound(&spec) > nested.profit + 1e-4);
    }

    #[test]
    fn single_price_menu() {
        let spec = power_pair(0.3, 0.5, 2049).unwrap();
        let d = Profiles::compute(&spec).d_star(AB);
        let p = demand_price(&spec, AB, d).unwrap();
        let sim = evaluate_menu(&spec, &[(AB, p)]);
        assert!((sim.profit - profit_curve(&spec, AB, d).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn second_item_menu_beats_first_item_menu() {
        // With gamma = 4.5 and beta = 0.6 the menu led by the best seller is the better one.
        let spec = power_pair(0.6, 4.5, 2049).unwrap();
        let with_b = optimize_menu(&spec, &[B, AB]).unwrap();
        let with_a = optimize_menu(&spec, &[A, AB]).unwrap();
        assert!(with_b.profit > with_a.profit + 0.05, "{} vs {}", with_b.profit, with_a.profit);
        assert_eq!(build_dominance(&Profiles::compute(&spec)).best_selling, Some(B));
    }

    #[test]
    fn detects_ic_violation() {
        let spec = monopoly();
        let types = spec.t_grid().to_vec();
        let alloc: Vec<Bundle> = types.iter().map(|&t| if t >= 0.5 { Bundle(1) } else { Bundle::EMPTY }).collect();
        let pay: Vec<f64> = types.iter().map(|&t| if t >= 0.5 { t * 0.5 + 0.25 } else { 0.0 }).collect();
        let sol = MechanismSolution::from_assignment(&spec, alloc, pay);
        let report = sol.check_ic_ir(&spec, 1e-9);
        let v = report.worst_ic.unwrap();
        assert_eq!(v.type_index, types.len() - 1);
        assert!((types[v.report_index] - 0.5).abs() < 1e-12);
        assert!((v.gain - 0.25).abs() < 1e-9);
    }

    #[test]
    fn menu_is_minimal() {
        let spec = power_pair(0.3, 0.5, 2049).unwrap();
        let menu = solve(&spec);
        for drop in 0..menu.tiers.len() {
            let rest: Vec<Bundle> = menu.bundles().into_iter().enumerate().filter(|(i, _)| *i != drop).map(|x| x.1).collect();
            let opt = optimize_menu(&spec, &rest).unwrap();
            assert!(opt.profit < menu.profit - 1e-6);
        }
        let best = best_nested_menu(&spec).unwrap();
        assert!((best.profit - menu.profit).abs() < 1e-6);
    }

    #[test]
    fn chain_enumeration() {
        let c = chains(&[A, B, AB]);
        assert_eq!(c, vec![vec![A], vec![B], vec![AB], vec![A, AB], vec![B, AB]]);
    }
}
