use serde::Serialize;

use super::spec::{ProblemSpec, STRICT_TOL};
use crate::bundle::Bundle;
use crate::demand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    InclusionMonotonicity,
    TypeMonotonicity,
    IncrementalValue,
    ProfitSinglePeaked,
    IncrementalProfitSinglePeaked,
    CornerSalesVolume,
    MultiplePeaks,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Warning {
    pub check: CheckKind,
    pub bundles: Vec<Bundle>,
    pub message: String,
}

impl Warning {
    pub fn new(check: CheckKind, bundles: Vec<Bundle>, message: String) -> Self {
        Self { check, bundles, message }
    }
}

/// Outcome of the grid checks on the modelling assumptions.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub incremental_value_increasing: bool,
    pub profit_single_peaked: bool,
    pub incremental_profit_single_peaked: bool,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.incremental_value_increasing && self.profit_single_peaked && self.incremental_profit_single_peaked
    }

    pub fn has(&self, check: CheckKind) -> bool {
        self.warnings.iter().any(|w| w.check == check)
    }
}

/// True when the sequence rises then falls, counting sign changes of
/// successive differences larger than a relative tolerance.
pub(crate) fn single_peaked(values: &[f64]) -> bool {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * scale;
    let mut falling = false;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d > tol && falling {
            return false;
        }
        if d < -tol {
            falling = true;
        }
    }
    true
}

/// Checks monotone incremental value and single-peaked (incremental) profit
/// for every pair of active bundles. Failures are reported, never fatal.
pub fn validate_assumptions(spec: &ProblemSpec) -> ValidationReport {
    let mut report = ValidationReport {
        incremental_value_increasing: true,
        profit_single_peaked: true,
        incremental_profit_single_peaked: true,
        warnings: Vec::new(),
    };
    let active = spec.active();
    let grid = spec.t_grid();
    let q_grid = spec.q_grid();
    let values: Vec<Vec<f64>> = active.iter().map(|&b| grid.iter().map(|&t| spec.v(b, t)).collect()).collect();
    let profits: Vec<Vec<f64>> = active
        .iter()
        .map(|&b| q_grid.iter().map(|&q| demand::profit_unchecked(spec, b, q)).collect())
        .collect();
    let volumes: Vec<demand::SalesVolume> = active.iter().map(|&b| demand::sales_volume(spec, b)).collect();

    for (i, &b) in active.iter().enumerate() {
        if !single_peaked(&profits[i]) {
            report.profit_single_peaked = false;
            report.warnings.push(Warning::new(
                CheckKind::ProfitSinglePeaked,
                vec![b],
                format!("π({b}, ·) is not single-peaked on [0, 1]"),
            ));
        }
        let sv = &volumes[i];
        if sv.multiple_peaks {
            report.warnings.push(Warning::new(
                CheckKind::MultiplePeaks,
                vec![b],
                format!("π({b}, ·) has several maxima of equal height; smallest quantity kept"),
            ));
        }
        if sv.corner {
            report.warnings.push(Warning::new(
                CheckKind::CornerSalesVolume,
                vec![b],
                format!("D*({b}) = {} is a corner solution", sv.d_star),
            ));
        }
    }

    for (i, &small) in active.iter().enumerate() {
        for (j, &large) in active.iter().enumerate() {
            if !small.is_proper_subset(large) {
                continue;
            }
            let mut ok = true;
            for k in 0..grid.len() - 1 {
                let d1 = values[j][k + 1] - values[i][k + 1];
                if d1 <= 0.0 {
                    continue;
                }
                let d0 = values[j][k] - values[i][k];
                if d1 - d0 < -STRICT_TOL {
                    ok = false;
                    break;
                }
            }
            if !ok {
                report.incremental_value_increasing = false;
                report.warnings.push(Warning::new(
                    CheckKind::IncrementalValue,
                    vec![small, large],
                    format!("v({large}, t) − v({small}, t) is not increasing where positive"),
                ));
            }
            let upper = volumes[i].d_star.min(volumes[j].d_star);
            let diff: Vec<f64> = q_grid
                .iter()
                .enumerate()
                .take_while(|&(_, &q)| q <= upper)
                .map(|(k, _)| profits[j][k] - profits[i][k])
                .collect();
            if !single_peaked(&diff) {
                report.incremental_profit_single_peaked = false;
                report.warnings.push(Warning::new(
                    CheckKind::IncrementalProfitSinglePeaked,
                    vec![small, large],
                    format!("π({large}, ·) − π({small}, ·) is not single-peaked on [0, {upper:.6}]"),
                ));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{TypeDistribution, ValueExpr};

    fn pair(k: f64) -> ProblemSpec {
        ProblemSpec::from_bundles(
            2,
            &[
                (Bundle(1), ValueExpr::monomials(&[(1.0, 1.0)]), 0.0),
                (Bundle(3), ValueExpr::new(ValueExpr::monomials(&[(1.0, 1.0), (1.0, 2.5)]).terms, k), 0.0),
            ],
            TypeDistribution::uniform(0.0, 1.0),
            2049,
        )
        .unwrap()
    }

    #[test]
    fn smooth_pair_passes() {
        let report = pair(0.0).validation().clone();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn offset_pair_passes_the_local_check() {
        let spec = pair(0.1);
        let report = spec.validation();
        assert!(report.incremental_profit_single_peaked, "{report:?}");
        let q = spec.q_grid();
        let whole: Vec<f64> = q
            .iter()
            .map(|&q| demand::profit_unchecked(&spec, Bundle(3), q) - demand::profit_unchecked(&spec, Bundle(1), q))
            .collect();
        assert!(!single_peaked(&whole));
    }

    #[test]
    fn single_item_parabola() {
        let spec = ProblemSpec::from_bundles(
            1,
            &[(Bundle(1), ValueExpr::monomials(&[(1.0, 1.0)]), 0.0)],
            TypeDistribution::uniform(0.0, 1.0),
            1001,
        )
        .unwrap();
        assert!(spec.validation().passed());
        assert!((demand::sales_volume(&spec, Bundle(1)).d_star - 0.5).abs() < 1e-9);
    }

    #[test]
    fn peak_counter() {
        assert!(single_peaked(&[0.0, 1.0, 2.0, 1.0, 0.0]));
        assert!(single_peaked(&[3.0, 2.0, 1.0]));
        assert!(single_peaked(&[1.0, 1.0, 1.0]));
        assert!(!single_peaked(&[0.0, 2.0, 1.0, 2.0]));
    }
}
