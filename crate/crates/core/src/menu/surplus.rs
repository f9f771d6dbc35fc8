use serde::Serialize;

use crate::bundle::Bundle;
use crate::model::ProblemSpec;
use crate::optimize::bisect_predicate;

/// `φ(b, t) = v(b, t) − C(b) − (1 − F(t))/f(t) · v_t(b, t)`.
pub fn virtual_surplus(spec: &ProblemSpec, b: Bundle, t: f64) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    let h = spec.distribution().hazard(t);
    let slope = if h == 0.0 { 0.0 } else { h * spec.v_t(b, t) };
    spec.v(b, t) - spec.cost(b) - slope
}

/// Last type at which the larger bundle's virtual surplus stops exceeding
/// the smaller one's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingRecord {
    pub small: Bundle,
    pub large: Bundle,
    pub s: f64,
    pub chi: f64,
}

/// `s(b1, b2) = inf{s : φ(b2, t) > φ(b1, t) for all t > s}` and
/// `χ = φ(b1, s)`.
pub fn last_crossing(spec: &ProblemSpec, small: Bundle, large: Bundle) -> CrossingRecord {
    let grid = spec.t_grid();
    let below = |t: f64| virtual_surplus(spec, large, t) <= virtual_surplus(spec, small, t);
    let top = grid.len() - 1;
    let s = match (0..=top).rev().find(|&k| below(grid[k])) {
        None => grid[0],
        Some(k) if k == top => grid[top],
        Some(k) => bisect_predicate(below, grid[k], grid[k + 1], 1e-9),
    };
    CrossingRecord { small, large, s, chi: virtual_surplus(spec, small, s) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{TypeDistribution, ValueExpr};

    fn single(expr: ValueExpr, hi: f64) -> ProblemSpec {
        ProblemSpec::from_bundles(1, &[(Bundle(1), expr, 0.0)], TypeDistribution::uniform(0.0, hi), 513).unwrap()
    }

    #[test]
    fn uniform_examples() {
        let lin = single(ValueExpr::monomials(&[(1.0, 1.0)]), 2.0);
        for t in [0.0, 0.5, 1.0, 1.7] {
            assert!((virtual_surplus(&lin, Bundle(1), t) - (2.0 * t - 2.0)).abs() < 1e-14);
        }
        assert_eq!(virtual_surplus(&lin, Bundle(1), 2.0), 2.0);
        let sq = single(ValueExpr::monomials(&[(1.0, 2.0)]), 1.0);
        for t in [0.1, 0.4, 0.9] {
            assert!((virtual_surplus(&sq, Bundle(1), t) - (3.0 * t * t - 2.0 * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn crossing_everywhere_above() {
        // φ({1,2}) − φ({1}) = t + (t − 1) > 0 only above 1/2, so the last crossing is 1/2.
        let spec = ProblemSpec::from_bundles(
            2,
            &[
                (Bundle(1), ValueExpr::monomials(&[(1.0, 1.0)]), 0.0),
                (Bundle(3), ValueExpr::monomials(&[(2.0, 1.0)]), 0.0),
            ],
            TypeDistribution::uniform(0.0, 1.0),
            513,
        )
        .unwrap();
        let rec = last_crossing(&spec, Bundle(1), Bundle(3));
        assert!((rec.s - 0.5).abs() < 1e-9);
        assert!(rec.chi.abs() < 1e-8);

        let shifted = ProblemSpec::from_bundles(
            2,
            &[
                (Bundle(1), ValueExpr::monomials(&[(1.0, 1.0)]), 0.0),
                (Bundle(3), ValueExpr::new(ValueExpr::monomials(&[(1.0, 1.0)]).terms, 0.5), 0.0),
            ],
            TypeDistribution::uniform(0.0, 1.0),
            513,
        )
        .unwrap();
        let rec = last_crossing(&shifted, Bundle(1), Bundle(3));
        assert_eq!(rec.s, 0.0);
        assert!((rec.chi + 1.0).abs() < 1e-12);
    }
}
