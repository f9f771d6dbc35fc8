//! Discretized optimal-mechanism linear program used as ground truth.

mod compare;
mod format;
mod instance;
mod nested;
mod solve;

pub use compare::{compare, verify, Comparison, Verdict, Verification};
pub use format::write_lp;
pub use instance::DiscretizedInstance;
pub use nested::{best_nested_discrete, discrete_menu_profit, DiscreteMenu};
pub use solve::{solve_lp, LpSolution};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::Bundle;
    use crate::demand::Profiles;
    use crate::dominance::build_dominance;
    use crate::families::power_pair;
    use crate::menu::{minimal_menu, relaxed_bound};
    use crate::model::{ProblemSpec, TypeDistribution, ValueExpr};

    fn monopoly() -> ProblemSpec {
        ProblemSpec::from_bundles(1, &[(Bundle(1), ValueExpr::monomials(&[(1.0, 1.0)]), 0.0)], TypeDistribution::uniform(0.0, 1.0), 1025)
            .unwrap()
    }

    #[test]
    fn monopoly_objective() {
        let v = verify(&monopoly(), 201).unwrap();
        assert!((v.lp.objective - 0.25).abs() < 0.005, "{}", v.lp.objective);
        assert_eq!(v.comparison.verdict, Verdict::Confirmed);
        assert!(v.lp.max_violation <= 1e-7);
        assert!(v.lp.is_deterministic(1e-6));
    }

    #[test]
    fn zero_values() {
        let spec = ProblemSpec::from_bundles(1, &[(Bundle(1), ValueExpr::zero(), 0.0)], TypeDistribution::uniform(0.0, 1.0), 257)
            .unwrap();
        let inst = DiscretizedInstance::new(&spec, 51).unwrap();
        let lp = solve_lp(&inst).unwrap();
        assert_eq!(lp.objective, 0.0);
        assert!(lp.allocation.iter().flatten().all(|&a| a == 0.0));
    }

    #[test]
    fn nested_menu_is_optimal_with_nesting() {
        let spec = power_pair(1.0, 0.5, 2049).unwrap();
        let profiles = Profiles::compute(&spec);
        let menu = minimal_menu(&spec, &profiles, &build_dominance(&profiles)).unwrap();
        let v = verify(&spec, 201).unwrap();
        assert!((v.lp.objective - menu.profit).abs() < 0.01);
        assert_eq!(v.comparison.verdict, Verdict::Confirmed);
    }

    #[test]
    fn lp_bounds_menus_and_is_bounded() {
        for (beta, gamma) in [(0.3, 0.5), (0.5, 4.5)] {
            let spec = power_pair(beta, gamma, 2049).unwrap();
            let v = verify(&spec, 101).unwrap();
            assert!(v.lp.objective >= v.nested.profit - 1e-7);
            if gamma < 1.0 {
                // Steep values at the top inflate the discrete objective beyond 5/m.
                assert!(v.lp.objective <= relaxed_bound(&spec) + v.instance.tolerance());
            }
            let menu = discrete_menu_profit(&v.instance, &[(Bundle(2), 0.7), (Bundle(3), 1.6)]);
            assert!(v.lp.objective >= menu - 1e-7);
        }
    }

    #[test]
    fn refinement_is_stable() {
        let spec = power_pair(0.3, 0.5, 2049).unwrap();
        let coarse = verify(&spec, 101).unwrap();
        let fine = verify(&spec, 201).unwrap();
        assert!((coarse.lp.objective - fine.lp.objective).abs() < coarse.instance.tolerance());
    }

    #[test]
    fn type_count_is_bounded() {
        let spec = monopoly();
        assert!(DiscretizedInstance::new(&spec, 5).is_err());
        assert!(DiscretizedInstance::new(&spec, 1000).is_err());
    }

    #[test]
    fn lp_file_lists_every_constraint() {
        let inst = DiscretizedInstance::new(&monopoly(), 11).unwrap();
        let text = write_lp(&inst);
        assert!(text.contains("Maximize") && text.contains("Subject To"));
        assert!(text.contains("End"));
        assert_eq!(text.matches("ic_").count(), 11 * 10);
    }
}
