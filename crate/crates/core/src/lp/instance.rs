use serde::Serialize;

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::model::ProblemSpec;

/// Types at quantile midpoints `F⁻¹((k − ½)/m)`, each with weight `1/m`.
#[derive(Debug, Clone, Serialize)]
pub struct DiscretizedInstance {
    pub m: usize,
    pub types: Vec<f64>,
    pub weights: Vec<f64>,
    /// Active bundles; inactive ones have zero value and are never assigned.
    pub bundles: Vec<Bundle>,
    /// `values[k][j] = v(bundles[j], types[k])`.
    pub values: Vec<Vec<f64>>,
    pub costs: Vec<f64>,
}

pub const MIN_TYPES: usize = 11;
pub const MAX_TYPES: usize = 401;

impl DiscretizedInstance {
    pub fn new(spec: &ProblemSpec, m: usize) -> Result<DiscretizedInstance> {
        if !(MIN_TYPES..=MAX_TYPES).contains(&m) {
            return Err(Error::Precondition(format!("type count {m} outside {MIN_TYPES}..={MAX_TYPES}")));
        }
        let bundles = spec.active().to_vec();
        if m * bundles.len() > 10_000 {
            return Err(Error::Precondition(format!("{} variables exceed the desk-scale limit", m * bundles.len())));
        }
        let dist = spec.distribution();
        let types: Vec<f64> = (0..m).map(|k| dist.quantile((k as f64 + 0.5) / m as f64)).collect();
        let values: Vec<Vec<f64>> = types.iter().map(|&t| bundles.iter().map(|&b| spec.v(b, t)).collect()).collect();
        for row in &values {
            for (i, &bi) in bundles.iter().enumerate() {
                for (j, &bj) in bundles.iter().enumerate() {
                    if bi.is_proper_subset(bj) && row[i] > row[j] + 1e-10 {
                        return Err(Error::Internal(format!("value row not monotone: {bi} above {bj}")));
                    }
                }
            }
        }
        Ok(DiscretizedInstance {
            m,
            weights: vec![1.0 / m as f64; m],
            costs: bundles.iter().map(|&b| spec.cost(b)).collect(),
            types,
            bundles,
            values,
        })
    }

    /// Verdict tolerance `5/m`.
    pub fn tolerance(&self) -> f64 {
        5.0 / self.m as f64
    }

    /// Utility of type `k` from the lottery `a` at payment `p`.
    pub fn utility(&self, k: usize, a: &[f64], p: f64) -> f64 {
        a.iter().zip(&self.values[k]).map(|(x, v)| x * v).sum::<f64>() - p
    }
}
