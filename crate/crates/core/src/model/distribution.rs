use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distribution of the one-dimensional consumer type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TypeDistribution {
    Uniform { lo: f64, hi: f64 },
    /// Piecewise-linear quantile function through the knots `(u_k, t_k)`.
    QuantileTable { u: Vec<f64>, t: Vec<f64> },
}

const FD_STEP: f64 = 1e-6;

impl TypeDistribution {
    pub fn uniform(lo: f64, hi: f64) -> Self {
        TypeDistribution::Uniform { lo, hi }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            TypeDistribution::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::Schema(format!("uniform support [{lo}, {hi}] is empty")));
                }
                if *lo < 0.0 {
                    return Err(Error::Schema(format!("type support must be nonnegative, lo = {lo}")));
                }
            }
            TypeDistribution::QuantileTable { u, t } => {
                if u.len() != t.len() || u.len() < 2 {
                    return Err(Error::Schema("quantile table needs matching u and t of length >= 2".into()));
                }
                if u[0] != 0.0 || *u.last().unwrap() != 1.0 {
                    return Err(Error::Schema("quantile table u must run from 0 to 1".into()));
                }
                if u.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) || t.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
                    return Err(Error::Schema("quantile table knots must be strictly increasing".into()));
                }
                if t[0] < 0.0 || !t.iter().all(|x| x.is_finite()) {
                    return Err(Error::Schema("quantile table types must be finite and nonnegative".into()));
                }
            }
        }
        Ok(())
    }

    pub fn lo(&self) -> f64 {
        match self {
            TypeDistribution::Uniform { lo, .. } => *lo,
            TypeDistribution::QuantileTable { t, .. } => t[0],
        }
    }

    pub fn hi(&self) -> f64 {
        match self {
            TypeDistribution::Uniform { hi, .. } => *hi,
            TypeDistribution::QuantileTable { t, .. } => *t.last().unwrap(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            TypeDistribution::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            TypeDistribution::QuantileTable { u, t } => interp(t, u, x),
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        match self {
            TypeDistribution::Uniform { lo, hi } => lo + (hi - lo) * p.clamp(0.0, 1.0),
            TypeDistribution::QuantileTable { u, t } => interp(u, t, p),
        }
    }

    /// Slope of the quantile function, `1 / f(Q(p))`.
    pub fn quantile_slope(&self, p: f64) -> f64 {
        match self {
            TypeDistribution::Uniform { lo, hi } => hi - lo,
            TypeDistribution::QuantileTable { .. } => {
                let a = (p - FD_STEP).max(0.0);
                let b = (p + FD_STEP).min(1.0);
                (self.quantile(b) - self.quantile(a)) / (b - a)
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.lo() || x > self.hi() {
            return 0.0;
        }
        1.0 / self.quantile_slope(self.cdf(x))
    }

    /// Inverse hazard rate `(1 − F(t)) / f(t)`.
    pub fn hazard(&self, x: f64) -> f64 {
        match self {
            TypeDistribution::Uniform { hi, .. } => (hi - x).max(0.0),
            TypeDistribution::QuantileTable { .. } => {
                let p = self.cdf(x);
                (1.0 - p) * self.quantile_slope(p)
            }
        }
    }

    /// `grid_size` equally spaced types across the support.
    pub fn type_grid(&self, grid_size: usize) -> Vec<f64> {
        let (lo, hi) = (self.lo(), self.hi());
        let last = (grid_size - 1) as f64;
        (0..grid_size)
            .map(|i| if i + 1 == grid_size { hi } else { lo + (hi - lo) * i as f64 / last })
            .collect()
    }
}

/// Linear interpolation of `ys` over increasing `xs`, clamped at the ends.
fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let n = xs.len();
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let k = xs.partition_point(|&v| v <= x) - 1;
    let w = (x - xs[k]) / (xs[k + 1] - xs[k]);
    ys[k] + w * (ys[k + 1] - ys[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> TypeDistribution {
        TypeDistribution::QuantileTable {
            u: vec![0.0, 0.3, 0.7, 1.0],
            t: vec![0.0, 0.5, 1.2, 2.0],
        }
    }

    #[test]
    fn uniform_basics() {
        let d = TypeDistribution::uniform(0.0, 2.0);
        assert_eq!(d.cdf(1.0), 0.5);
        assert_eq!(d.quantile(0.25), 0.5);
        assert_eq!(d.pdf(1.3), 0.5);
        assert_eq!(d.hazard(0.5), 1.5);
        assert_eq!(d.hazard(2.0), 0.0);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for d in [TypeDistribution::uniform(0.5, 3.0), table()] {
            for i in 0..=1000 {
                let x = d.lo() + (d.hi() - d.lo()) * i as f64 / 1000.0;
                assert!((d.quantile(d.cdf(x)) - x).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn table_density_is_reciprocal_slope() {
        let d = table();
        assert!((d.pdf(0.2) - 0.3 / 0.5).abs() < 1e-9);
        assert!((d.pdf(1.5) - 0.3 / 0.8).abs() < 1e-9);
        assert!((d.hazard(1.5) - (1.0 - d.cdf(1.5)) * 0.8 / 0.3).abs() < 1e-9);
    }

    #[test]
    fn table_matching_uniform_agrees() {
        let tab = TypeDistribution::QuantileTable { u: vec![0.0, 0.5, 1.0], t: vec![0.0, 1.0, 2.0] };
        let uni = TypeDistribution::uniform(0.0, 2.0);
        for x in [0.1, 0.7, 1.0, 1.9] {
            assert!((tab.hazard(x) - uni.hazard(x)).abs() < 1e-9);
            assert!((tab.cdf(x) - uni.cdf(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_tables() {
        let bad = TypeDistribution::QuantileTable { u: vec![0.0, 0.5, 0.5, 1.0], t: vec![0.0, 1.0, 1.5, 2.0] };
        assert!(bad.check().is_err());
        let short = TypeDistribution::QuantileTable { u: vec![0.0, 1.0], t: vec![1.0] };
        assert!(short.check().is_err());
        assert!(TypeDistribution::uniform(1.0, 1.0).check().is_err());
    }

    #[test]
    fn grid_hits_both_ends() {
        let g = TypeDistribution::uniform(0.0, 2.0).type_grid(5);
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }
}
