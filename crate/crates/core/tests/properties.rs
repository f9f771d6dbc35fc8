mod common;

use bundling::applications::{lower_increasing_envelope, upper_decreasing_envelope};
use bundling::demand::{sales_volume, Profiles};
use bundling::dominance::build_dominance;
use bundling::families::power_pair;
use bundling::lp::{best_nested_discrete, solve_lp, DiscretizedInstance};
use bundling::menu::{evaluate_menu, minimal_menu, relaxed_bound, virtual_surplus};
use bundling::model::{ProblemSpec, TypeDistribution, ValueExpr};
use bundling::quadrature::mass;
use bundling::Bundle;
use proptest::prelude::*;

fn single(coef: f64, exp: f64, hi: f64) -> ProblemSpec {
    ProblemSpec::from_bundles(1, &[(Bundle(1), ValueExpr::monomials(&[(coef, exp)]), 0.0)], TypeDistribution::uniform(0.0, hi), 2049)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    // For a power value on a uniform support the sales volume ignores scale.
    #[test]
    fn power_sales_volume(coef in 0.1f64..5.0, exp in 0.2f64..3.0, hi in 0.5f64..4.0) {
        let d = sales_volume(&single(coef, exp, hi), Bundle(1)).d_star;
        prop_assert!((d - 1.0 / (1.0 + exp)).abs() < 1e-7);
    }

    #[test]
    fn virtual_surplus_at_top(coef in 0.1f64..5.0, exp in 0.2f64..3.0) {
        let spec = single(coef, exp, 1.0);
        prop_assert!((virtual_surplus(&spec, Bundle(1), 1.0) - coef).abs() < 1e-12);
    }

    #[test]
    fn envelopes(values in proptest::collection::vec(-5.0f64..5.0, 1..20)) {
        let up = upper_decreasing_envelope(&values);
        let low = lower_increasing_envelope(&values);
        for k in 0..values.len() {
            prop_assert!(up[k] >= values[k] && low[k] <= values[k]);
            let tail = &values[k..];
            prop_assert_eq!(up[k], tail.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            prop_assert_eq!(low[k], tail.iter().copied().fold(f64::INFINITY, f64::min));
        }
        prop_assert!(up.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(low.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn mass_adds_up(lo in 0.0f64..1.0, split in 0.0f64..1.0) {
        let dist = TypeDistribution::uniform(0.0, 1.0);
        let mid = lo + (1.0 - lo) * split;
        let total = mass(&dist, lo, mid) + mass(&dist, mid, 1.0);
        prop_assert!((total - (1.0 - lo)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    // Nested menus on the power family: bounded by the relaxation, priced
    // increasingly, incentive compatible and revenue equivalent.
    #[test]
    fn power_family_menus(beta in 0.1f64..2.0, gamma in 0.3f64..1.0) {
        let spec = power_pair(beta, gamma, 2049).unwrap();
        let profiles = Profiles::compute(&spec);
        let dom = build_dominance(&profiles);
        prop_assume!(dom.nested);
        let menu = minimal_menu(&spec, &profiles, &dom).unwrap();
        prop_assert!(menu.profit <= relaxed_bound(&spec) + 1e-9);
        prop_assert!(menu.tiers.windows(2).all(|w| w[0].price < w[1].price && w[0].quantity > w[1].quantity));
        prop_assert!(menu.bundles().iter().all(|&b| dom.is_undominated(b)));
        let sim = evaluate_menu(&spec, &menu.options());
        prop_assert!((sim.profit - menu.profit).abs() < 1e-6);
        prop_assert!(sim.check_ic_ir(&spec, 1e-7).holds());
        prop_assert!(sim.revenue_equivalence_gap() < 1e-6);
    }

    // Dominance is a partial order that refines inclusion.
    #[test]
    fn dominance_order(seed in 0u64..10_000) {
        let mut r = common::rng(seed);
        let Ok(spec) = common::random_instance(&mut r, 513) else { return Ok(()) };
        let dom = build_dominance(&Profiles::compute(&spec));
        let act = spec.active();
        for &a in act {
            prop_assert!(dom.precedes(a, a));
            for &b in act {
                if dom.precedes(a, b) {
                    prop_assert!(a.is_subset(b));
                    for &c in act {
                        if dom.precedes(b, c) {
                            prop_assert!(dom.precedes(a, c), "{} {} {}", a, b, c);
                        }
                    }
                }
            }
        }
        prop_assert!(dom.is_undominated(spec.grand()));
        if let Some(best) = dom.best_selling {
            prop_assert!(dom.is_undominated(best));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    // The mechanism LP relaxes every deterministic nested menu on the same
    // discretization and satisfies all its constraints.
    #[test]
    fn lp_relaxes_nested_menus(seed in 0u64..10_000) {
        let mut r = common::rng(seed);
        let Ok(spec) = common::random_instance(&mut r, 513) else { return Ok(()) };
        let inst = DiscretizedInstance::new(&spec, 41).unwrap();
        let lp = solve_lp(&inst).unwrap();
        let nested = best_nested_discrete(&inst);
        prop_assert!(lp.objective >= nested.profit - 1e-7);
        prop_assert!(lp.max_violation <= 1e-7);
        for row in &lp.allocation {
            prop_assert!(row.iter().sum::<f64>() <= 1.0 + 1e-7);
        }
    }
}
