use serde::Serialize;

use super::instance::DiscretizedInstance;
use crate::bundle::Bundle;

/// A priced chain on the discrete types.
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteMenu {
    pub chain: Vec<Bundle>,
    /// Index of the lowest type buying each tier or above.
    pub cutoffs: Vec<usize>,
    pub prices: Vec<f64>,
    pub profit: f64,
}

/// Most profitable nested menu on the discrete instance.
///
/// With tier `j` sold to types `k ≥ c_j`, prices leave each cutoff type
/// indifferent, so the profit is
/// `Σ_j W(c_j)·(v(b_j, t_{c_j}) − v(b_{j−1}, t_{c_j}) − C(b_j) + C(b_{j−1}))`
/// with `W(c)` the mass of types from `c` up. A dynamic program over
/// (last bundle, last cutoff) maximizes this over all chains at once.
pub fn best_nested_discrete(inst: &DiscretizedInstance) -> DiscreteMenu {
    let m = inst.m;
    let nb = inst.bundles.len();
    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by_key(|&j| (inst.bundles[j].len(), inst.bundles[j].mask()));
    let mut tail = vec![0.0; m + 1];
    for k in (0..m).rev() {
        tail[k] = tail[k + 1] + inst.weights[k];
    }
    // best[j][c]: chain ending in bundle j with last cutoff c.
    let mut best = vec![vec![f64::NEG_INFINITY; m]; nb];
    // prefix[j][c] = max over c' ≤ c of best[j][c'], with its argmax.
    let mut prefix = vec![vec![(f64::NEG_INFINITY, 0usize); m]; nb];
    let mut back: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; m]; nb];
    for &j in &order {
        let bj = inst.bundles[j];
        for c in 0..m {
            let w = tail[c];
            let mut value = w * (inst.values[c][j] - inst.costs[j]);
            let mut from = None;
            for &i in &order {
                if !inst.bundles[i].is_proper_subset(bj) {
                    continue;
                }
                let (pm, pc) = prefix[i][c];
                if pm == f64::NEG_INFINITY {
                    continue;
                }
                let cand = pm + w * (inst.values[c][j] - inst.values[c][i] - inst.costs[j] + inst.costs[i]);
                if cand > value {
                    value = cand;
                    from = Some((i, pc));
                }
            }
            best[j][c] = value;
            back[j][c] = from;
            let prev = if c == 0 { (f64::NEG_INFINITY, 0) } else { prefix[j][c - 1] };
            prefix[j][c] = if value > prev.0 { (value, c) } else { prev };
        }
    }
    let mut top: Option<(f64, usize, usize)> = None;
    for &j in &order {
        for (c, &value) in best[j].iter().enumerate() {
            if value > top.map_or(0.0, |t| t.0) {
                top = Some((value, j, c));
            }
        }
    }
    let Some((profit, mut j, mut c)) = top else {
        return DiscreteMenu { chain: Vec::new(), cutoffs: Vec::new(), prices: Vec::new(), profit: 0.0 };
    };
    let mut chain = vec![(j, c)];
    while let Some((i, ci)) = back[j][c] {
        chain.push((i, ci));
        j = i;
        c = ci;
    }
    chain.reverse();
    let mut prices = Vec::with_capacity(chain.len());
    let mut total = 0.0;
    let mut prev: Option<usize> = None;
    for &(j, c) in &chain {
        total += inst.values[c][j] - prev.map_or(0.0, |i| inst.values[c][i]);
        prices.push(total);
        prev = Some(j);
    }
    DiscreteMenu {
        chain: chain.iter().map(|&(j, _)| inst.bundles[j]).collect(),
        cutoffs: chain.iter().map(|&(_, c)| c).collect(),
        prices,
        profit,
    }
}

/// Profit of a posted menu on the discrete types; indifferent types take
/// the more expensive option.
pub fn discrete_menu_profit(inst: &DiscretizedInstance, options: &[(Bundle, f64)]) -> f64 {
    let idx: Vec<Option<usize>> = options.iter().map(|(b, _)| inst.bundles.iter().position(|x| x == b)).collect();
    let mut profit = 0.0;
    for k in 0..inst.m {
        let mut best_u = 0.0;
        let mut best: Option<usize> = None;
        for (o, &(_, price)) in options.iter().enumerate() {
            let v = idx[o].map_or(0.0, |j| inst.values[k][j]);
            let u = v - price;
            let better = match best {
                None => u >= best_u - 1e-12,
                Some(b) => u > best_u + 1e-12 || (u >= best_u - 1e-12 && price > options[b].1),
            };
            if better {
                best_u = u;
                best = Some(o);
            }
        }
        if let Some(o) = best {
            let cost = idx[o].map_or(0.0, |j| inst.costs[j]);
            profit += inst.weights[k] * (options[o].1 - cost);
        }
    }
    profit
}
