//! Expectations over the type distribution of piecewise-selected integrands.
//!
//! The type grid is cut into pieces on which a fixed option maximizes a
//! score; switching types inside a grid cell are located by bisection, and
//! each piece is integrated with three-point Gauss–Legendre in quantile space.

use crate::model::TypeDistribution;
use crate::optimize::bisect_predicate;

/// Interval `[lo, hi]` of types on which `option` is selected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub option: usize,
}

const GL_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GL_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Index of the largest score, ties to the lower index.
pub fn select(n_options: usize, score: &dyn Fn(usize, f64) -> f64, t: f64) -> usize {
    let mut best = 0;
    let mut best_score = score(0, t);
    for i in 1..n_options {
        let s = score(i, t);
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    best
}

/// Splits every grid cell at the types where the selected option changes.
pub fn pieces(grid: &[f64], n_options: usize, score: &dyn Fn(usize, f64) -> f64) -> Vec<Piece> {
    let span = grid[grid.len() - 1] - grid[0];
    let tol = 1e-13 * span.max(1e-300);
    let sel: Vec<usize> = grid.iter().map(|&t| select(n_options, score, t)).collect();
    let mut out = Vec::with_capacity(grid.len());
    for k in 0..grid.len() - 1 {
        let (mut a, b) = (grid[k], grid[k + 1]);
        let mut sa = sel[k];
        let sb = sel[k + 1];
        let mut guard = 0;
        while sa != sb && guard < 64 {
            guard += 1;
            let current = sa;
            let x = bisect_predicate(|t| select(n_options, score, t) == current, a, b, tol);
            out.push(Piece { lo: a, hi: x, option: sa });
            a = x;
            sa = select(n_options, score, (x + tol).min(b));
            if sa == current {
                break;
            }
        }
        out.push(Piece { lo: a, hi: b, option: sb });
    }
    out.retain(|p| p.hi > p.lo);
    out
}

/// Joins adjacent pieces carrying the same option.
pub fn merge(pieces: &[Piece]) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::new();
    for &p in pieces {
        match out.last_mut() {
            Some(last) if last.option == p.option => last.hi = p.hi,
            _ => out.push(p),
        }
    }
    out
}

/// `∫_lo^hi g(t) dF(t)` as `∫_{F(lo)}^{F(hi)} g(F⁻¹(u)) du`.
pub fn integrate(dist: &TypeDistribution, lo: f64, hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (ua, ub) = (dist.cdf(lo), dist.cdf(hi));
    if ub <= ua {
        return 0.0;
    }
    let half = 0.5 * (ub - ua);
    let mid = 0.5 * (ub + ua);
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(&x, w)| w * g(dist.quantile(mid + half * x)))
        .sum::<f64>()
        * half
}

/// Probability mass of `[lo, hi]`.
pub fn mass(dist: &TypeDistribution, lo: f64, hi: f64) -> f64 {
    (dist.cdf(hi) - dist.cdf(lo)).max(0.0)
}

/// `E[max_i score(i, t)]` with the maximizer chosen per piece.
pub fn expected_envelope(
    dist: &TypeDistribution,
    grid: &[f64],
    n_options: usize,
    score: &dyn Fn(usize, f64) -> f64,
) -> f64 {
    pieces(grid, n_options, score)
        .iter()
        .map(|p| integrate(dist, p.lo, p.hi, |t| score(p.option, t)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_part_of_linear() {
        let d = TypeDistribution::uniform(0.0, 1.0);
        let grid = d.type_grid(11);
        let score = |i: usize, t: f64| if i == 0 { 0.0 } else { 2.0 * t - 1.0 };
        let v = expected_envelope(&d, &grid, 2, &score);
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn switch_inside_cell_is_exact() {
        let d = TypeDistribution::uniform(0.0, 1.0);
        let grid = d.type_grid(3);
        let score = |i: usize, t: f64| match i {
            0 => 0.0,
            1 => t - 0.3,
            _ => 2.0 * t - 1.0,
        };
        let p = merge(&pieces(&grid, 3, &score));
        assert_eq!(p.len(), 3);
        assert!((p[0].hi - 0.3).abs() < 1e-12);
        assert!((p[1].hi - 0.7).abs() < 1e-12);
        let v = expected_envelope(&d, &grid, 3, &score);
        let want = 0.5 * 0.4 * 0.4 + (1.0 - 0.49) - 0.3;
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
    }

    #[test]
    fn smooth_integral_in_quantile_space() {
        let d = TypeDistribution::uniform(0.0, 2.0);
        let v = integrate(&d, 0.0, 2.0, |t| t.powi(5));
        assert!((v - 64.0 / 6.0 / 2.0 * 1.0).abs() < 1e-12);
    }
}
