//! Parameterized problem families used by sweeps and tests.

use crate::bundle::Bundle;
use crate::error::Result;
use crate::model::{ProblemSpec, TypeDistribution, ValueExpr};

/// Two items on `U[0, 2]` with `v({1}) = t`, `v({2}) = t^β` and
/// `v({1,2}) = t + t^β + t^γ`, all at zero cost.
pub fn power_pair(beta: f64, gamma: f64, grid_size: usize) -> Result<ProblemSpec> {
    ProblemSpec::from_bundles(
        2,
        &[
            (Bundle(0b01), ValueExpr::monomials(&[(1.0, 1.0)]), 0.0),
            (Bundle(0b10), ValueExpr::monomials(&[(1.0, beta)]), 0.0),
            (Bundle(0b11), ValueExpr::monomials(&[(1.0, 1.0), (1.0, beta), (1.0, gamma)]), 0.0),
        ],
        TypeDistribution::uniform(0.0, 2.0),
        grid_size,
    )
}

/// `{a, a + step, …}` up to and including `b` (within rounding).
pub fn parameter_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && b >= a);
    let n = ((b - a) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| ((a + step * i as f64) * 1e12).round() / 1e12).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoint() {
        let g = parameter_grid(0.1, 2.0, 0.1);
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[19], 2.0);
        assert_eq!(g[6], 0.7);
    }

    #[test]
    fn family_is_valid() {
        for beta in [0.1, 1.0, 2.0] {
            for gamma in [0.5, 4.5] {
                let spec = power_pair(beta, gamma, 513).unwrap();
                assert_eq!(spec.active().len(), 3);
            }
        }
    }
}
