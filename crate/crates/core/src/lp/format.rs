use std::fmt::Write;

use super::instance::DiscretizedInstance;

/// The full mechanism LP in CPLEX LP text format.
pub fn write_lp(inst: &DiscretizedInstance) -> String {
    let nb = inst.bundles.len();
    let a = |k: usize, j: usize| format!("a_{k}_{}", inst.bundles[j].mask());
    let p = |k: usize| format!("p_{k}");
    let coef = |x: f64| if x < 0.0 { format!(" - {:.17e}", -x) } else { format!(" + {x:.17e}") };
    let mut s = String::new();
    let _ = writeln!(s, "\\ types {} bundles {}", inst.m, nb);
    s.push_str("Maximize\n obj:");
    for k in 0..inst.m {
        s.push_str(&format!("{} {}", coef(inst.weights[k]), p(k)));
        for j in 0..nb {
            if inst.costs[j] != 0.0 {
                s.push_str(&format!("{} {}", coef(-inst.weights[k] * inst.costs[j]), a(k, j)));
            }
        }
    }
    s.push_str("\nSubject To\n");
    for k in 0..inst.m {
        let _ = write!(s, " feas_{k}:");
        for j in 0..nb {
            let _ = write!(s, " + {}", a(k, j));
        }
        s.push_str(" <= 1\n");
        let _ = write!(s, " ir_{k}:");
        for j in 0..nb {
            let _ = write!(s, "{} {}", coef(inst.values[k][j]), a(k, j));
        }
        let _ = writeln!(s, " - {} >= 0", p(k));
    }
    for k in 0..inst.m {
        for l in 0..inst.m {
            if k == l {
                continue;
            }
            let _ = write!(s, " ic_{k}_{l}:");
            for j in 0..nb {
                let v = inst.values[k][j];
                let _ = write!(s, "{} {}{} {}", coef(v), a(k, j), coef(-v), a(l, j));
            }
            let _ = writeln!(s, " - {} + {} >= 0", p(k), p(l));
        }
    }
    s.push_str("Bounds\n");
    for k in 0..inst.m {
        for j in 0..nb {
            let _ = writeln!(s, " 0 <= {} <= 1", a(k, j));
        }
        let _ = writeln!(s, " {} free", p(k));
    }
    s.push_str("End\n");
    s
}
