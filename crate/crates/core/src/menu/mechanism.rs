use serde::Serialize;

use super::algorithm::NestedMenu;
use super::{telescoping_prices, virtual_surplus};
use crate::bundle::Bundle;
use crate::demand::profit_unchecked;
use crate::dominance::DominanceRelation;
use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::optimize;
use crate::quadrature::{self, integrate, mass, merge, pieces, select};

/// One priced menu entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MenuOption {
    pub bundle: Bundle,
    pub price: f64,
}

/// Interval of types receiving one option.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub bundle: Bundle,
    pub price: f64,
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

/// Deterministic direct mechanism on the type grid.
#[derive(Debug, Clone, Serialize)]
pub struct MechanismSolution {
    pub types: Vec<f64>,
    pub allocation: Vec<Bundle>,
    pub payment: Vec<f64>,
    pub utility: Vec<f64>,
    pub options: Vec<MenuOption>,
    pub segments: Vec<Segment>,
    /// Expected payment minus production cost.
    pub profit: f64,
    /// `E[Σ a_b(t) φ(b, t)]`.
    pub virtual_profit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IcViolation {
    /// Type index that gains by misreporting.
    pub type_index: usize,
    /// Type index whose report it prefers.
    pub report_index: usize,
    pub gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IcReport {
    pub worst_ic: Option<IcViolation>,
    /// Type index and utility of the worst participation violation.
    pub worst_ir: Option<(usize, f64)>,
}

impl IcReport {
    pub fn holds(&self) -> bool {
        self.worst_ic.is_none() && self.worst_ir.is_none()
    }
}

impl MechanismSolution {
    /// `|profit − E[Σ a φ]|`; zero when the lowest type is held to zero utility.
    pub fn revenue_equivalence_gap(&self) -> f64 {
        (self.profit - self.virtual_profit).abs()
    }

    pub fn lowest_type_utility(&self) -> f64 {
        self.utility[0]
    }

    /// Checks every grid type against every other type's report.
    pub fn check_ic_ir(&self, spec: &ProblemSpec, tol: f64) -> IcReport {
        let mut reps: Vec<(Bundle, f64, usize)> = Vec::new();
        for (j, (&a, &p)) in self.allocation.iter().zip(&self.payment).enumerate() {
            if !reps.iter().any(|r| r.0 == a && r.1 == p) {
                reps.push((a, p, j));
            }
        }
        let mut worst_ic: Option<IcViolation> = None;
        let mut worst_ir: Option<(usize, f64)> = None;
        for (i, &t) in self.types.iter().enumerate() {
            let u = self.utility[i];
            if u < -tol && worst_ir.is_none_or(|w| u < w.1) {
                worst_ir = Some((i, u));
            }
            for &(a, p, j) in &reps {
                let gain = spec.v(a, t) - p - u;
                if gain > tol && worst_ic.is_none_or(|w| gain > w.gain) {
                    worst_ic = Some(IcViolation { type_index: i, report_index: j, gain });
                }
            }
        }
        IcReport { worst_ic, worst_ir }
    }

    /// Mechanism from an explicit per-type assignment on the grid; expected
    /// values use the trapezoid rule in quantile space.
    pub fn from_assignment(spec: &ProblemSpec, allocation: Vec<Bundle>, payment: Vec<f64>) -> MechanismSolution {
        let types = spec.t_grid().to_vec();
        assert_eq!(allocation.len(), types.len());
        assert_eq!(payment.len(), types.len());
        let utility: Vec<f64> = types.iter().zip(&allocation).zip(&payment).map(|((&t, &a), &p)| spec.v(a, t) - p).collect();
        let dist = spec.distribution();
        let trapezoid = |g: &dyn Fn(usize) -> f64| -> f64 {
            (0..types.len() - 1).map(|k| 0.5 * (g(k) + g(k + 1)) * mass(dist, types[k], types[k + 1])).sum()
        };
        let profit = trapezoid(&|k| payment[k] - spec.cost(allocation[k]));
        let virtual_profit = trapezoid(&|k| virtual_surplus(spec, allocation[k], types[k]));
        let mut options: Vec<MenuOption> = Vec::new();
        for (&a, &p) in allocation.iter().zip(&payment) {
            if !a.is_empty() && !options.iter().any(|o| o.bundle == a && o.price == p) {
                options.push(MenuOption { bundle: a, price: p });
            }
        }
        MechanismSolution { types, allocation, payment, utility, options, segments: Vec::new(), profit, virtual_profit }
    }
}

fn solution_from_pieces(
    spec: &ProblemSpec,
    grid: &[f64],
    opts: &[MenuOption],
    score: &dyn Fn(usize, f64) -> f64,
) -> MechanismSolution {
    let dist = spec.distribution();
    let cut = pieces(grid, opts.len(), score);
    let mut profit = 0.0;
    let mut virtual_profit = 0.0;
    for p in &cut {
        let o = opts[p.option];
        profit += mass(dist, p.lo, p.hi) * (o.price - spec.cost(o.bundle));
        if !o.bundle.is_empty() {
            virtual_profit += integrate(dist, p.lo, p.hi, |t| virtual_surplus(spec, o.bundle, t));
        }
    }
    let segments = merge(&cut)
        .iter()
        .map(|p| Segment {
            bundle: opts[p.option].bundle,
            price: opts[p.option].price,
            lo: p.lo,
            hi: p.hi,
            mass: mass(dist, p.lo, p.hi),
        })
        .collect();
    let types = spec.t_grid().to_vec();
    let chosen: Vec<usize> = types.iter().map(|&t| select(opts.len(), score, t)).collect();
    let allocation: Vec<Bundle> = chosen.iter().map(|&i| opts[i].bundle).collect();
    let payment: Vec<f64> = chosen.iter().map(|&i| opts[i].price).collect();
    let utility = types.iter().zip(&chosen).map(|(&t, &i)| spec.v(opts[i].bundle, t) - opts[i].price).collect();
    MechanismSolution {
        types,
        allocation,
        payment,
        utility,
        options: opts[1..].to_vec(),
        segments,
        profit,
        virtual_profit,
    }
}

fn with_outside_option(options: &[(Bundle, f64)]) -> Vec<MenuOption> {
    let mut opts: Vec<MenuOption> = options.iter().map(|&(bundle, price)| MenuOption { bundle, price }).collect();
    opts.sort_by(|a, b| a.price.partial_cmp(&b.price).unwrap().then(a.bundle.cmp(&b.bundle)));
    opts.insert(0, MenuOption { bundle: Bundle::EMPTY, price: 0.0 });
    opts
}

fn menu_profit_on(spec: &ProblemSpec, grid: &[f64], options: &[(Bundle, f64)]) -> f64 {
    let opts = with_outside_option(options);
    let score = |i: usize, t: f64| spec.v(opts[i].bundle, t) - opts[i].price;
    let dist = spec.distribution();
    pieces(grid, opts.len(), &score)
        .iter()
        .map(|p| mass(dist, p.lo, p.hi) * (opts[p.option].price - spec.cost(opts[p.option].bundle)))
        .sum()
}

/// Simulated consumer choice: each type buys its utility-maximizing option,
/// ties going to the cheaper one, and abstains when every option gives
/// negative utility.
pub fn evaluate_menu(spec: &ProblemSpec, options: &[(Bundle, f64)]) -> MechanismSolution {
    let opts = with_outside_option(options);
    let score = |i: usize, t: f64| spec.v(opts[i].bundle, t) - opts[i].price;
    solution_from_pieces(spec, spec.t_grid(), &opts, &score)
}

/// Pointwise maximizer of `max{0, φ(b, t) : b undominated}` with the
/// telescoping prices at its switching types.
pub fn envelope_allocation(spec: &ProblemSpec, dominance: &DominanceRelation) -> Result<MechanismSolution> {
    if !dominance.nested {
        return Err(Error::NotNested);
    }
    let mut chain = dominance.undominated.clone();
    chain.sort_by_key(|b| (b.len(), b.mask()));
    let mut bundles = vec![Bundle::EMPTY];
    bundles.extend(&chain);
    let score = |i: usize, t: f64| virtual_surplus(spec, bundles[i], t);
    let cut = merge(&pieces(spec.t_grid(), bundles.len(), &score));
    let mut sold: Vec<(Bundle, f64)> = Vec::new();
    let mut last = 0;
    for p in &cut {
        if p.option < last {
            return Err(Error::NonMonotoneAllocation { t: p.lo });
        }
        if p.option > last {
            sold.push((bundles[p.option], p.lo));
        }
        last = p.option;
    }
    let tiers: Vec<Bundle> = sold.iter().map(|s| s.0).collect();
    let cutoffs: Vec<f64> = sold.iter().map(|s| s.1).collect();
    let prices = telescoping_prices(spec, &tiers, &cutoffs);
    let mut opts = vec![MenuOption { bundle: Bundle::EMPTY, price: 0.0 }];
    opts.extend(tiers.iter().zip(&prices).map(|(&bundle, &price)| MenuOption { bundle, price }));
    let index_of = |b: Bundle| opts.iter().position(|o| o.bundle == b);
    let score_opts = |i: usize, t: f64| virtual_surplus(spec, opts[i].bundle, t);
    let mut sol = solution_from_pieces(spec, spec.t_grid(), &opts, &score_opts);
    // Types are assigned by the envelope, not by utility; utilities follow.
    for (k, &t) in sol.types.iter().enumerate() {
        let i = index_of(sol.allocation[k]).unwrap_or(0);
        sol.payment[k] = opts[i].price;
        sol.utility[k] = spec.v(opts[i].bundle, t) - opts[i].price;
    }
    Ok(sol)
}

/// `E[max{0, max_b φ(b, t)}]` over every active bundle: an upper bound on
/// the profit of any mechanism.
pub fn relaxed_bound(spec: &ProblemSpec) -> f64 {
    let mut bundles = vec![Bundle::EMPTY];
    bundles.extend(spec.active());
    let score = |i: usize, t: f64| virtual_surplus(spec, bundles[i], t);
    quadrature::expected_envelope(spec.distribution(), spec.t_grid(), bundles.len(), &score)
}

/// Best prices found for a fixed set of bundles.
#[derive(Debug, Clone, Serialize)]
pub struct MenuOptimum {
    pub bundles: Vec<Bundle>,
    pub options: Vec<(Bundle, f64)>,
    /// Tier quantities when the bundles form a chain.
    pub quantities: Option<Vec<f64>>,
    pub profit: f64,
    #[serde(skip)]
    pub solution: MechanismSolution,
}

fn is_chain(sorted: &[Bundle]) -> bool {
    sorted.windows(2).all(|w| w[0].is_proper_subset(w[1]))
}

/// Optimizes prices for the given bundles. Chains are optimized in quantity
/// space, where the profit separates into incremental profits of successive
/// tiers; other sets by a coarse price grid refined by pattern search.
pub fn optimize_menu(spec: &ProblemSpec, bundles: &[Bundle]) -> Result<MenuOptimum> {
    let mut sorted = bundles.to_vec();
    sorted.sort_by_key(|b| (b.len(), b.mask()));
    sorted.dedup();
    if sorted.is_empty() || sorted.iter().any(|b| b.is_empty()) {
        return Err(Error::Precondition("menu needs at least one nonempty bundle".into()));
    }
    if is_chain(&sorted) {
        optimize_chain(spec, &sorted)
    } else {
        if sorted.len() > 3 {
            return Err(Error::Precondition("price search supports at most three non-nested bundles".into()));
        }
        Ok(optimize_prices(spec, &sorted))
    }
}

fn optimize_chain(spec: &ProblemSpec, chain: &[Bundle]) -> Result<MenuOptimum> {
    let l = chain.len();
    let inc = |j: usize, q: f64| {
        let prev = if j == 0 { Bundle::EMPTY } else { chain[j - 1] };
        profit_unchecked(spec, chain[j], q) - profit_unchecked(spec, prev, q)
    };
    let inc_slope = |j: usize, q: f64| {
        let prev = if j == 0 { Bundle::EMPTY } else { chain[j - 1] };
        let t = spec.distribution().quantile(1.0 - q);
        virtual_surplus(spec, chain[j], t) - virtual_surplus(spec, prev, t)
    };

    // Coarse DP over a descending quantity grid with q_1 ≥ … ≥ q_l.
    let g = 2001;
    let qs: Vec<f64> = (0..g).map(|k| 1.0 - k as f64 / (g - 1) as f64).collect();
    let mut best = vec![0.0; g];
    let mut arg: Vec<Vec<usize>> = Vec::with_capacity(l);
    for j in 0..l {
        let mut next = vec![f64::NEG_INFINITY; g];
        let mut from = vec![0usize; g];
        let mut run = f64::NEG_INFINITY;
        let mut run_k = 0;
        for k in 0..g {
            if best[k] > run {
                run = best[k];
                run_k = k;
            }
            next[k] = run + inc(j, qs[k]);
            from[k] = run_k;
        }
        best = next;
        arg.push(from);
    }
    let mut k = (0..g).fold(0, |b, k| if best[k] > best[b] { k } else { b });
    let mut q = vec![0.0; l];
    for j in (0..l).rev() {
        q[j] = qs[k];
        k = arg[j][k];
    }

    for _ in 0..4 {
        for j in 0..l {
            let hi = if j == 0 { 1.0 } else { q[j - 1] };
            let lo = if j + 1 == l { 0.0 } else { q[j + 1] };
            if hi - lo <= 1e-12 {
                continue;
            }
            let slope = |x: f64| inc_slope(j, x);
            let m = optimize::maximize(|x| inc(j, x), Some(&slope), lo, hi, 201, 1e-12);
            q[j] = m.x;
        }
    }
    let tiers: Vec<(Bundle, f64)> = chain.iter().copied().zip(q.iter().copied()).collect();
    let menu = NestedMenu::from_quantities(spec, &tiers)?;
    let options = menu.options();
    let solution = evaluate_menu(spec, &options);
    Ok(MenuOptimum {
        bundles: chain.to_vec(),
        profit: solution.profit,
        options,
        quantities: Some(q),
        solution,
    })
}

fn optimize_prices(spec: &ProblemSpec, bundles: &[Bundle]) -> MenuOptimum {
    let coarse = spec.distribution().type_grid(257);
    let fine = spec.distribution().type_grid(1025);
    let caps: Vec<f64> = bundles.iter().map(|&b| spec.v(b, spec.t_hi()).max(1e-12)).collect();
    let levels: usize = match bundles.len() {
        1 => 401,
        2 => 81,
        _ => 25,
    };
    let mut prices = vec![0.0; bundles.len()];
    let mut best_prices = prices.clone();
    let mut best = f64::NEG_INFINITY;
    let total = levels.pow(bundles.len() as u32);
    for code in 0..total {
        let mut c = code;
        for (j, p) in prices.iter_mut().enumerate() {
            *p = caps[j] * (c % levels) as f64 / (levels - 1) as f64;
            c /= levels;
        }
        let opts: Vec<(Bundle, f64)> = bundles.iter().copied().zip(prices.iter().copied()).collect();
        let v = menu_profit_on(spec, &coarse, &opts);
        if v > best {
            best = v;
            best_prices.clone_from(&prices);
        }
    }
    let eval = |p: &[f64]| {
        let opts: Vec<(Bundle, f64)> = bundles.iter().copied().zip(p.iter().copied()).collect();
        menu_profit_on(spec, &fine, &opts)
    };
    let mut step: Vec<f64> = caps.iter().map(|c| c / (levels - 1) as f64).collect();
    best = eval(&best_prices);
    while step.iter().any(|&s| s > 1e-10) {
        let mut improved = false;
        for j in 0..bundles.len() {
            for dir in [-1.0, 1.0] {
                let mut trial = best_prices.clone();
                trial[j] = (trial[j] + dir * step[j]).max(0.0);
                let v = eval(&trial);
                if v > best + 1e-15 {
                    best = v;
                    best_prices = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            for s in &mut step {
                *s *= 0.5;
            }
        }
    }
    let options: Vec<(Bundle, f64)> = bundles.iter().copied().zip(best_prices).collect();
    let solution = evaluate_menu(spec, &options);
    MenuOptimum { bundles: bundles.to_vec(), profit: solution.profit, options, quantities: None, solution }
}

/// Every chain of active bundles, shortest first.
pub fn chains(active: &[Bundle]) -> Vec<Vec<Bundle>> {
    let mut sorted = active.to_vec();
    sorted.sort_by_key(|b| (b.len(), b.mask()));
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Bundle>> = sorted.iter().map(|&b| vec![b]).collect();
    while let Some(c) = stack.pop() {
        let last = *c.last().unwrap();
        for &b in &sorted {
            if last.is_proper_subset(b) {
                let mut longer = c.clone();
                longer.push(b);
                stack.push(longer);
            }
        }
        out.push(c);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Most profitable nested menu over all chains of active bundles.
pub fn best_nested_menu(spec: &ProblemSpec) -> Result<MenuOptimum> {
    let mut best: Option<MenuOptimum> = None;
    for c in chains(spec.active()) {
        let m = optimize_chain(spec, &c)?;
        if best.as_ref().is_none_or(|b| m.profit > b.profit + 1e-12) {
            best = Some(m);
        }
    }
    best.ok_or_else(|| Error::Precondition("no active bundles".into()))
}
