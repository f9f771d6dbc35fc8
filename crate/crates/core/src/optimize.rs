//! One-dimensional search: grid scans, golden section and bisection.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A refined local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub value: f64,
}

/// Result of a bracketed global maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    /// Refined local maxima from the coarse scan, best first.
    pub peaks: Vec<Peak>,
    /// More than one grid point attains the maximum (within 1e-12) at
    /// separated locations.
    pub tied_grid_maxima: bool,
}

impl Maximum {
    pub fn is_single_peaked(&self) -> bool {
        self.peaks.len() <= 1
    }
}

/// Maximizes a unimodal `f` on `[a, b]` to an interval width of `tol`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, p| if p.1 > best.1 { p } else { best })
}

/// Root of `g` on `[a, b]` given a sign change, to width `tol`.
pub fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Last point `x` in `[a, b]` where `pred` holds, given `pred(a)` and not
/// `pred(b)`, to width `tol`.
pub fn bisect_predicate(pred: impl Fn(f64) -> bool, mut a: f64, mut b: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if pred(m) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Global maximum of `f` on `[a, b]`: an `n`-point scan brackets every local
/// maximum, each bracket is refined by golden section to `tol`, and if
/// `slope` is given a sign change of the slope inside the bracket is located
/// by bisection so the argmax is not limited by the flatness of `f`.
pub fn maximize(
    f: impl Fn(f64) -> f64,
    slope: Option<&dyn Fn(f64) -> f64>,
    a: f64,
    b: f64,
    n: usize,
    tol: f64,
) -> Maximum {
    assert!(n >= 3 && b >= a);
    let xs: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let top = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = ys.iter().fold(1.0f64, |m, y| m.max(y.abs()));

    let mut tied_groups = 0;
    let mut in_group = false;
    for &y in &ys {
        let tied = y >= top - 1e-12 * scale;
        if tied && !in_group {
            tied_groups += 1;
        }
        in_group = tied;
    }

    // Local maxima, treating plateaus as a single maximum at their left end.
    let mut locals = Vec::new();
    let mut k = 0;
    while k < n {
        let mut e = k;
        while e + 1 < n && ys[e + 1] == ys[k] {
            e += 1;
        }
        let left_ok = k == 0 || ys[k - 1] < ys[k];
        let right_ok = e + 1 == n || ys[e + 1] < ys[k];
        if left_ok && right_ok {
            locals.push(k);
        }
        k = e + 1;
    }
    if locals.is_empty() {
        locals.push(0);
    }
    locals.sort_by(|&i, &j| ys[j].partial_cmp(&ys[i]).unwrap().then(i.cmp(&j)));

    let mut peaks: Vec<Peak> = locals
        .iter()
        .take(4)
        .map(|&k| refine(&f, slope, &xs, k, tol))
        .collect();
    peaks.sort_by(|p, q| q.value.partial_cmp(&p.value).unwrap().then(p.x.partial_cmp(&q.x).unwrap()));
    let best = peaks[0];
    Maximum { x: best.x, value: best.value, peaks, tied_grid_maxima: tied_groups > 1 }
}

fn refine(f: &impl Fn(f64) -> f64, slope: Option<&dyn Fn(f64) -> f64>, xs: &[f64], k: usize, tol: f64) -> Peak {
    let n = xs.len();
    let lo = xs[k.saturating_sub(1)];
    let hi = xs[(k + 1).min(n - 1)];
    let (mut x, mut value) = golden_max(f, lo, hi, tol);
    let fl = f(lo);
    if fl > value {
        x = lo;
        value = fl;
    }
    let fh = f(hi);
    if fh > value {
        x = hi;
        value = fh;
    }
    if let Some(g) = slope {
        let (gl, gh) = (g(lo), g(hi));
        if gl > 0.0 && gh < 0.0 {
            let root = bisect(g, lo, hi, 1e-15);
            let fr = f(root);
            if fr >= value - 1e-12 * value.abs().max(1.0) {
                x = root;
                value = fr.max(value);
            }
        }
    }
    Peak { x, value }
}
