use serde::{Deserialize, Serialize};

use crate::bundle::Bundle;

/// One monomial `coef · t^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    pub exp: f64,
}

/// `Σ coef·t^exp + constant`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValueExpr {
    pub terms: Vec<Term>,
    #[serde(rename = "const", default)]
    pub constant: f64,
}

impl ValueExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(terms: Vec<Term>, constant: f64) -> Self {
        Self { terms, constant }
    }

    /// Sum of monomials `(coef, exp)` with no constant.
    pub fn monomials(terms: &[(f64, f64)]) -> Self {
        Self {
            terms: terms.iter().map(|&(coef, exp)| Term { coef, exp }).collect(),
            constant: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.terms.iter().all(|t| t.coef == 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|m| m.coef * t.powf(m.exp)).sum::<f64>() + self.constant
    }

    /// Analytic derivative in `t`. Terms with exponent below one are
    /// evaluated at `max(t, 1e-300)` so the slope stays finite at zero.
    pub fn deriv(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .filter(|m| m.exp != 0.0 && m.coef != 0.0)
            .map(|m| {
                let base = if m.exp < 1.0 { t.max(1e-300) } else { t };
                m.coef * m.exp * base.powf(m.exp - 1.0)
            })
            .sum()
    }

    /// Sum of two expressions.
    pub fn plus(&self, other: &ValueExpr) -> ValueExpr {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        ValueExpr::new(terms, self.constant + other.constant)
    }

    /// Scalar multiple.
    pub fn scaled(&self, k: f64) -> ValueExpr {
        ValueExpr::new(
            self.terms.iter().map(|m| Term { coef: k * m.coef, exp: m.exp }).collect(),
            k * self.constant,
        )
    }
}

/// Value expressions indexed by bundle mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueFunction {
    exprs: Vec<ValueExpr>,
}

impl ValueFunction {
    pub fn new(exprs: Vec<ValueExpr>) -> Self {
        Self { exprs }
    }

    pub fn expr(&self, b: Bundle) -> &ValueExpr {
        &self.exprs[b.index()]
    }

    pub fn eval(&self, b: Bundle, t: f64) -> f64 {
        self.exprs[b.index()].eval(t)
    }

    pub fn deriv(&self, b: Bundle, t: f64) -> f64 {
        self.exprs[b.index()].deriv(t)
    }

    pub fn len(&self) -> usize {
        self.exprs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exprs.is_empty()
    }
}

/// Production cost per bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    costs: Vec<f64>,
}

impl CostFunction {
    pub fn new(costs: Vec<f64>) -> Self {
        Self { costs }
    }

    pub fn zero(n_items: usize) -> Self {
        Self { costs: vec![0.0; 1 << n_items] }
    }

    pub fn get(&self, b: Bundle) -> f64 {
        self.costs[b.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.costs.iter().all(|&c| c == 0.0)
    }
}
