use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::distribution::TypeDistribution;
use super::validate::{validate_assumptions, ValidationReport, Warning};
use super::value::{CostFunction, Term, ValueExpr, ValueFunction};
use crate::bundle::{Bundle, MAX_ITEMS};
use crate::error::{Error, Result};
use crate::DEFAULT_GRID;

/// Slack on load-time monotonicity and strictness checks.
pub(crate) const STRICT_TOL: f64 = 1e-10;
const TOP_SLACK: f64 = 1e-9;

/// JSON form of a problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub n_items: usize,
    pub distribution: DistributionDoc,
    pub values: BTreeMap<String, ExprDoc>,
    #[serde(default)]
    pub costs: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
}

pub type DistributionDoc = TypeDistribution;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExprDoc {
    #[serde(default)]
    pub terms: Vec<TermDoc>,
    #[serde(rename = "const", default)]
    pub constant: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coef: f64,
    pub exp: f64,
}

/// Validated problem: valuations, costs and type distribution.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    n_items: usize,
    values: ValueFunction,
    costs: CostFunction,
    distribution: TypeDistribution,
    grid_size: usize,
    active: Vec<Bundle>,
    t_grid: Vec<f64>,
    report: ValidationReport,
}

/// Parses and validates a JSON problem document.
pub fn load_spec(document: &str) -> Result<ProblemSpec> {
    let doc: SpecDocument = serde_json::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
    ProblemSpec::from_document(&doc)
}

impl ProblemSpec {
    /// Builds a spec from per-mask values and costs (both of length `2^n`).
    pub fn new(
        n_items: usize,
        values: Vec<ValueExpr>,
        costs: Vec<f64>,
        distribution: TypeDistribution,
        grid_size: usize,
    ) -> Result<ProblemSpec> {
        if n_items == 0 || n_items > MAX_ITEMS {
            return Err(Error::Schema(format!("n_items = {n_items} outside 1..={MAX_ITEMS}")));
        }
        if !(3..=1 << 20).contains(&grid_size) {
            return Err(Error::Schema(format!("grid_size = {grid_size} outside 3..=1048576")));
        }
        let size = 1usize << n_items;
        if values.len() != size || costs.len() != size {
            return Err(Error::Schema(format!("expected {size} value and cost entries")));
        }
        distribution.check()?;
        for expr in &values {
            for m in &expr.terms {
                if !m.coef.is_finite() || !m.exp.is_finite() || m.exp < 0.0 {
                    return Err(Error::Schema(format!("term {}·t^{} is not a finite monomial with exp >= 0", m.coef, m.exp)));
                }
            }
            if !expr.constant.is_finite() {
                return Err(Error::Schema("non-finite constant".into()));
            }
        }
        let t_grid = distribution.type_grid(grid_size);
        if !values[0].is_zero() {
            let t = t_grid.iter().copied().find(|&t| values[0].eval(t) != 0.0).unwrap_or(t_grid[0]);
            return Err(Error::EmptyBundleValue { t, value: values[0].eval(t) });
        }
        for (mask, &c) in costs.iter().enumerate() {
            if c.is_nan() || c < 0.0 || !c.is_finite() {
                return Err(Error::NegativeCost { bundle: Bundle(mask as u32), cost: c });
            }
        }
        if costs[0] != 0.0 {
            return Err(Error::Schema("cost of the empty bundle must be zero".into()));
        }
        let active: Vec<Bundle> = Bundle::all(n_items).filter(|b| !b.is_empty() && !values[b.index()].is_zero()).collect();
        let mut spec = ProblemSpec {
            n_items,
            values: ValueFunction::new(values),
            costs: CostFunction::new(costs),
            distribution,
            grid_size,
            active,
            t_grid,
            report: ValidationReport::default(),
        };
        let warnings = spec.load_checks()?;
        let mut report = validate_assumptions(&spec);
        report.warnings.splice(0..0, warnings);
        spec.report = report;
        Ok(spec)
    }

    /// Builds a spec listing only the bundles that carry value or cost.
    pub fn from_bundles(
        n_items: usize,
        entries: &[(Bundle, ValueExpr, f64)],
        distribution: TypeDistribution,
        grid_size: usize,
    ) -> Result<ProblemSpec> {
        if n_items == 0 || n_items > MAX_ITEMS {
            return Err(Error::Schema(format!("n_items = {n_items} outside 1..={MAX_ITEMS}")));
        }
        let size = 1usize << n_items;
        let mut values = vec![ValueExpr::zero(); size];
        let mut costs = vec![0.0; size];
        for (b, v, c) in entries {
            if b.index() >= size {
                return Err(Error::Schema(format!("bundle {b} outside {n_items} items")));
            }
            values[b.index()] = v.clone();
            costs[b.index()] = *c;
        }
        ProblemSpec::new(n_items, values, costs, distribution, grid_size)
    }

    pub fn from_document(doc: &SpecDocument) -> Result<ProblemSpec> {
        let n = doc.n_items;
        if n == 0 || n > MAX_ITEMS {
            return Err(Error::Schema(format!("n_items = {n} outside 1..={MAX_ITEMS}")));
        }
        let size = 1usize << n;
        let mut values = vec![ValueExpr::zero(); size];
        let mut seen = vec![false; size];
        for (label, e) in &doc.values {
            let b = Bundle::parse_label(label, n)?;
            if std::mem::replace(&mut seen[b.index()], true) {
                return Err(Error::Schema(format!("bundle {label} listed twice")));
            }
            values[b.index()] = ValueExpr::new(
                e.terms.iter().map(|t| Term { coef: t.coef, exp: t.exp }).collect(),
                e.constant,
            );
        }
        let mut costs = vec![0.0; size];
        let mut seen = vec![false; size];
        for (label, &c) in &doc.costs {
            let b = Bundle::parse_label(label, n)?;
            if std::mem::replace(&mut seen[b.index()], true) {
                return Err(Error::Schema(format!("cost for {label} listed twice")));
            }
            costs[b.index()] = c;
        }
        ProblemSpec::new(n, values, costs, doc.distribution.clone(), doc.grid_size.unwrap_or(DEFAULT_GRID))
    }

    pub fn to_document(&self) -> SpecDocument {
        let mut values = BTreeMap::new();
        let mut costs = BTreeMap::new();
        for b in Bundle::all(self.n_items).skip(1) {
            let e = self.values.expr(b);
            if !e.is_zero() {
                values.insert(
                    b.label(),
                    ExprDoc {
                        terms: e.terms.iter().map(|t| TermDoc { coef: t.coef, exp: t.exp }).collect(),
                        constant: e.constant,
                    },
                );
            }
            if self.cost(b) != 0.0 {
                costs.insert(b.label(), self.cost(b));
            }
        }
        SpecDocument {
            n_items: self.n_items,
            distribution: self.distribution.clone(),
            values,
            costs,
            grid_size: Some(self.grid_size),
        }
    }

    /// Same problem on a different grid.
    pub fn with_grid(&self, grid_size: usize) -> Result<ProblemSpec> {
        let values = Bundle::all(self.n_items).map(|b| self.values.expr(b).clone()).collect();
        let costs = Bundle::all(self.n_items).map(|b| self.cost(b)).collect();
        ProblemSpec::new(self.n_items, values, costs, self.distribution.clone(), grid_size)
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn grand(&self) -> Bundle {
        Bundle::full(self.n_items)
    }

    pub fn values(&self) -> &ValueFunction {
        &self.values
    }

    pub fn costs(&self) -> &CostFunction {
        &self.costs
    }

    pub fn distribution(&self) -> &TypeDistribution {
        &self.distribution
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn v(&self, b: Bundle, t: f64) -> f64 {
        self.values.eval(b, t)
    }

    pub fn v_t(&self, b: Bundle, t: f64) -> f64 {
        self.values.deriv(b, t)
    }

    pub fn cost(&self, b: Bundle) -> f64 {
        self.costs.get(b)
    }

    /// Nonempty bundles whose value function is not identically zero.
    pub fn active(&self) -> &[Bundle] {
        &self.active
    }

    pub fn is_active(&self, b: Bundle) -> bool {
        self.active.binary_search(&b).is_ok()
    }

    pub fn t_lo(&self) -> f64 {
        self.distribution.lo()
    }

    pub fn t_hi(&self) -> f64 {
        self.distribution.hi()
    }

    /// Shared uniform type grid.
    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    /// Shared uniform quantity grid on `[0, 1]`.
    pub fn q_grid(&self) -> Vec<f64> {
        let last = (self.grid_size - 1) as f64;
        (0..self.grid_size).map(|i| i as f64 / last).collect()
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    fn load_checks(&self) -> Result<Vec<Warning>> {
        let grid = &self.t_grid;
        let table: Vec<Vec<f64>> = self
            .active
            .iter()
            .map(|&b| grid.iter().map(|&t| self.v(b, t)).collect())
            .collect();
        let mut warnings = Vec::new();
        for (i, &b) in self.active.iter().enumerate() {
            let row = &table[i];
            if let Some(k) = row.iter().position(|&v| v < -STRICT_TOL) {
                warnings.push(Warning::new(
                    super::validate::CheckKind::InclusionMonotonicity,
                    vec![Bundle::EMPTY, b],
                    format!("v({b}, {}) = {} is negative", grid[k], row[k]),
                ));
            }
            let mut flat = None;
            for k in 0..grid.len() - 1 {
                if row[k + 1] <= 0.0 {
                    continue;
                }
                let d = row[k + 1] - row[k];
                if d < -STRICT_TOL {
                    return Err(Error::NotIncreasingInType { bundle: b, t0: grid[k], t1: grid[k + 1] });
                }
                if d <= STRICT_TOL && row[k] > 0.0 && flat.is_none() {
                    flat = Some(k);
                }
            }
            if let Some(k) = flat {
                warnings.push(Warning::new(
                    super::validate::CheckKind::TypeMonotonicity,
                    vec![b],
                    format!("v({b}, ·) is flat near t = {}", grid[k]),
                ));
            }
        }
        for (i, &small) in self.active.iter().enumerate() {
            for (j, &large) in self.active.iter().enumerate() {
                if !small.is_proper_subset(large) {
                    continue;
                }
                for k in 0..grid.len() {
                    if table[i][k] > table[j][k] + STRICT_TOL {
                        return Err(Error::NotMonotoneInclusion {
                            small,
                            large,
                            t: grid[k],
                            v_small: table[i][k],
                            v_large: table[j][k],
                        });
                    }
                }
            }
        }
        let top = self.t_hi();
        let grand = self.grand();
        let grand_surplus = self.v(grand, top) - self.cost(grand);
        for b in Bundle::all(self.n_items) {
            let surplus = self.v(b, top) - self.cost(b);
            if surplus > grand_surplus + TOP_SLACK {
                return Err(Error::EfficiencyAtTop { bundle: b, surplus, grand_surplus });
            }
        }
        Ok(warnings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1_doc(beta: f64, gamma: f64) -> String {
        format!(
            r#"{{"n_items":2,"distribution":{{"kind":"uniform","lo":0,"hi":2}},
            "values":{{"[1]":{{"terms":[{{"coef":1,"exp":1}}]}},
                       "[2]":{{"terms":[{{"coef":1,"exp":{beta}}}]}},
                       "[1,2]":{{"terms":[{{"coef":1,"exp":1}},{{"coef":1,"exp":{beta}}},{{"coef":1,"exp":{gamma}}}]}}}},
            "grid_size":1025}}"#
        )
    }

    #[test]
    fn accepts_two_item_power_family() {
        let spec = load_spec(&example1_doc(0.3, 0.5)).unwrap();
        assert_eq!(spec.active().len(), 3);
        assert_eq!(spec.grid_size(), 1025);
        assert!((spec.v(Bundle(3), 1.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_subset_with_larger_value() {
        let doc = r#"{"n_items":2,"distribution":{"kind":"uniform","lo":0,"hi":1},
            "values":{"[1]":{"terms":[{"coef":1,"exp":1}]},"[1,2]":{"terms":[{"coef":0.5,"exp":1}]}}}"#;
        match load_spec(doc) {
            Err(Error::NotMonotoneInclusion { small, large, t, .. }) => {
                assert_eq!(small, Bundle(1));
                assert_eq!(large, Bundle(3));
                assert!(t > 0.0);
            }
            other => panic!("expected monotonicity failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_costly_grand_bundle() {
        let doc = r#"{"n_items":2,"distribution":{"kind":"uniform","lo":0,"hi":1},
            "values":{"[1]":{"terms":[{"coef":2,"exp":1}]},"[2]":{"terms":[{"coef":2,"exp":1}]},
                      "[1,2]":{"terms":[{"coef":5,"exp":1}]}},
            "costs":{"[1,2]":10}}"#;
        assert!(matches!(load_spec(doc), Err(Error::EfficiencyAtTop { .. })));
    }

    #[test]
    fn rejects_schema_problems() {
        assert!(matches!(load_spec("{}"), Err(Error::Schema(_))));
        let neg = r#"{"n_items":1,"distribution":{"kind":"uniform","lo":0,"hi":1},
            "values":{"[1]":{"terms":[{"coef":1,"exp":1}]}},"costs":{"[1]":-1}}"#;
        assert!(matches!(load_spec(neg), Err(Error::NegativeCost { .. })));
        let empty = r#"{"n_items":1,"distribution":{"kind":"uniform","lo":0,"hi":1},
            "values":{"[]":{"const":1},"[1]":{"terms":[{"coef":1,"exp":1}]}}}"#;
        assert!(matches!(load_spec(empty), Err(Error::EmptyBundleValue { .. })));
        let decreasing = r#"{"n_items":1,"distribution":{"kind":"uniform","lo":0,"hi":1},
            "values":{"[1]":{"terms":[{"coef":-1,"exp":1}],"const":2}}}"#;
        assert!(matches!(load_spec(decreasing), Err(Error::NotIncreasingInType { .. })));
        let unknown = r#"{"n_items":1,"distribution":{"kind":"uniform","lo":0,"hi":1},"values":{},"extra":1}"#;
        assert!(matches!(load_spec(unknown), Err(Error::Schema(_))));
    }

    #[test]
    fn document_round_trip() {
        let spec = load_spec(&example1_doc(1.5, 0.5)).unwrap();
        let text = serde_json::to_string(&spec.to_document()).unwrap();
        let again = load_spec(&text).unwrap();
        assert_eq!(again.values(), spec.values());
        assert_eq!(again.costs(), spec.costs());
        assert_eq!(again.grid_size(), spec.grid_size());
    }

    #[test]
    fn omitted_bundles_are_inactive() {
        let spec = load_spec(&example1_doc(0.3, 0.5)).unwrap();
        let single = spec.with_grid(65).unwrap();
        assert_eq!(single.t_grid().len(), 65);
        assert!(!spec.is_active(Bundle::EMPTY));
    }
}
