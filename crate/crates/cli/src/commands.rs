use std::fs;
use std::path::Path;

use bundling::applications::{
    quality_menu_via_ccheck, quality_menu_via_dhat, screening_lp_check, screening_optimal, tier, transition,
    QualityProblem, ScreeningProblem,
};
use bundling::demand::Profiles;
use bundling::dominance::{build_dominance, check_union_elasticity};
use bundling::families::{parameter_grid, power_pair};
use bundling::lp::{verify as lp_verify, write_lp, Comparison, Verdict};
use bundling::menu::{best_nested_menu, evaluate_menu, minimal_menu, relaxed_bound};
use bundling::model::load_spec;
use bundling::{Bundle, Error, ProblemSpec, TypeDistribution, ValueExpr, DEFAULT_GRID};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{list, num, Provenance, Sink, Table};
use crate::{CliError, Common};

const BOUND_TOL: f64 = 1e-6;
const IC_TOL: f64 = 1e-7;

pub fn parse_range(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err("expected a:b:step".into());
    };
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    let (a, b, step) = (p(a)?, p(b)?, p(step)?);
    if !(step > 0.0 && b >= a) {
        return Err("need step > 0 and b >= a".into());
    }
    Ok((a, b, step))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn grid_override(common: &Common) -> Option<usize> {
    common.grid.map(|g| g as usize)
}

fn load(path: &Path, common: &Common) -> Result<(ProblemSpec, Provenance), CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut spec = load_spec(&text)?;
    if let Some(g) = grid_override(common) {
        spec = spec.with_grid(g)?;
    }
    let prov = Provenance::new(&bytes, spec.grid_size());
    Ok((spec, prov))
}

fn sink(common: &Common) -> Result<Sink, CliError> {
    Sink::new(common.out.clone(), common.format)
}

pub fn analyze(path: &Path, hasse: bool, common: &Common) -> Result<(), CliError> {
    let (spec, prov) = load(path, common)?;
    let out = sink(common)?;
    let profiles = Profiles::compute(&spec);
    let dom = build_dominance(&profiles);
    let union = check_union_elasticity(&spec);

    let mut table = Table::new(&["bundle", "d_star", "t_star", "peak_profit", "corner", "multiple_peaks", "undominated"]);
    for sv in profiles.iter() {
        table.row(vec![
            sv.bundle.label(),
            num(sv.d_star),
            num(sv.t_star),
            num(sv.peak_profit),
            sv.corner.to_string(),
            sv.multiple_peaks.to_string(),
            dom.is_undominated(sv.bundle).to_string(),
        ]);
    }
    out.csv("demand.csv", &table, &prov)?;
    out.json(
        "analysis.json",
        &json!({
            "validation": spec.validation(),
            "dominance": &dom,
            "union_elasticity": &union,
            "sales_volumes": &profiles,
        }),
    )?;
    let dot = dom.to_dot();
    if hasse {
        out.write("hasse.dot", &dot)?;
        print!("{dot}");
        return Ok(());
    }
    out.dot("hasse.dot", &dot)?;

    println!("bundle     D*          t*          peak profit");
    for sv in profiles.iter() {
        println!("{:<10} {:<11.6} {:<11.6} {:.6}", sv.bundle.to_string(), sv.d_star, sv.t_star, sv.peak_profit);
    }
    println!("sales order: {}", list(&dom.sales_order));
    println!("undominated: {}", list(&dom.undominated));
    println!("nested: {}", dom.nested);
    if let Some(b) = dom.best_selling {
        println!("best seller: {b}{}", if dom.best_selling_tie { " (tied)" } else { "" });
    }
    println!("union elasticity: {}", if union.holds { "holds" } else { "fails" });
    let report = spec.validation();
    println!("assumptions: {}", if report.passed() { "pass" } else { "warnings" });
    for w in &report.warnings {
        println!("  warning [{:?}] {}", w.check, w.message);
    }
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    nested: bool,
    menu: Option<bundling::NestedMenu>,
    best_nested_profit: f64,
    relaxed_bound: f64,
    bound_gap: Option<f64>,
    envelope_profit: Option<f64>,
    ic_ir_holds: Option<bool>,
    revenue_equivalence_gap: Option<f64>,
    lp: Option<Comparison>,
    certificate: &'static str,
    reasons: Vec<String>,
}

pub fn solve(path: &Path, types: usize, csv: bool, common: &Common) -> Result<(), CliError> {
    let (spec, prov) = load(path, common)?;
    let out = sink(common)?;
    let profiles = Profiles::compute(&spec);
    let dom = build_dominance(&profiles);
    let bound = relaxed_bound(&spec);
    let mut reasons = Vec::new();

    let (menu, envelope_profit, ic, re_gap, best_nested_profit) = if dom.nested {
        let menu = minimal_menu(&spec, &profiles, &dom)?;
        let sim = evaluate_menu(&spec, &menu.options());
        let ic = sim.check_ic_ir(&spec, IC_TOL).holds();
        let env = bundling::menu::envelope_allocation(&spec, &dom)?;
        let p = menu.profit;
        (Some(menu), Some(env.profit), Some(ic), Some(sim.revenue_equivalence_gap()), p)
    } else {
        reasons.push("undominated bundles are not nested".to_string());
        (None, None, None, None, best_nested_menu(&spec)?.profit)
    };
    let bound_gap = menu.as_ref().map(|m| (m.profit - bound).abs());
    if let Some(m) = &menu {
        if !m.certificate_valid() {
            reasons.push(format!("incremental profit not single-peaked for {}", list(&m.peak_warnings)));
        }
    }
    if bound_gap.is_some_and(|g| g > BOUND_TOL) {
        reasons.push(format!("menu profit misses the relaxed bound by {}", bound_gap.unwrap()));
    }
    if ic == Some(false) {
        reasons.push("simulated menu violates incentive or participation constraints".to_string());
    }
    let lp = if types > 0 {
        let v = lp_verify(&spec, types)?;
        if v.comparison.verdict != Verdict::Confirmed {
            reasons.push(format!("LP verdict {}", v.comparison.verdict));
        }
        Some(v.comparison)
    } else {
        None
    };
    let certificate = match (&lp, reasons.is_empty()) {
        (_, false) => "INVALID",
        (Some(_), true) => "CONFIRMED",
        (None, true) => "VALID",
    };

    let mut table = Table::new(&["tier", "bundle", "quantity", "cutoff", "price", "upgrade_price"]);
    if let Some(m) = &menu {
        for (i, t) in m.tiers.iter().enumerate() {
            table.row(vec![
                (i + 1).to_string(),
                t.bundle.label(),
                num(t.quantity),
                num(t.cutoff),
                num(t.price),
                num(t.upgrade_price),
            ]);
        }
    }
    out.csv("menu.csv", &table, &prov)?;
    let report = SolveReport {
        nested: dom.nested,
        menu: menu.clone(),
        best_nested_profit,
        relaxed_bound: bound,
        bound_gap,
        envelope_profit,
        ic_ir_holds: ic,
        revenue_equivalence_gap: re_gap,
        lp,
        certificate,
        reasons: reasons.clone(),
    };
    out.json("solve.json", &report)?;

    if csv {
        print!("{}", table.render(&prov));
    } else {
        if let Some(m) = &menu {
            println!("tier  bundle     quantity    cutoff      price       upgrade");
            for (i, t) in m.tiers.iter().enumerate() {
                println!(
                    "{:<5} {:<10} {:<11.6} {:<11.6} {:<11.6} {:.6}",
                    i + 1,
                    t.bundle.to_string(),
                    t.quantity,
                    t.cutoff,
                    t.price,
                    t.upgrade_price
                );
            }
            println!("profit: {:.8}", m.profit);
        } else {
            println!("no nested minimal menu; best nested profit: {best_nested_profit:.8}");
        }
        println!("relaxed bound: {bound:.8}");
        if let Some(c) = &lp {
            println!("lp objective: {:.8} (m = {types}, tolerance {:.6})", c.lp_objective, c.tolerance);
        }
        println!("certificate: {certificate}");
        for r in &reasons {
            println!("  {r}");
        }
    }
    if certificate == "INVALID" {
        return Err(CliError::Invalid(reasons.join("; ")));
    }
    Ok(())
}

pub fn verify(path: &Path, types: usize, dump_lp: bool, common: &Common) -> Result<(), CliError> {
    let (spec, prov) = load(path, common)?;
    let out = sink(common)?;
    if dump_lp && out.dir().is_none() {
        return Err(CliError::Input("--dump-lp needs --out".into()));
    }
    let v = lp_verify(&spec, types)?;
    let c = v.comparison;
    let mut header = vec!["type".to_string(), "weight".to_string(), "payment".to_string()];
    header.extend(v.instance.bundles.iter().map(|b| format!("a{}", b.label())));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header_refs);
    for k in 0..v.instance.m {
        let mut row = vec![num(v.instance.types[k]), num(v.instance.weights[k]), num(v.lp.payments[k])];
        row.extend(v.lp.allocation[k].iter().map(|&a| num(a)));
        table.row(row);
    }
    out.csv("lp_mechanism.csv", &table, &prov)?;
    out.json(
        "verify.json",
        &json!({
            "comparison": c,
            "nested": &v.nested,
            "lp": {
                "objective": v.lp.objective,
                "rounds": v.lp.rounds,
                "ic_constraints": v.lp.ic_constraints,
                "max_violation": v.lp.max_violation,
                "deterministic": v.lp.is_deterministic(1e-6),
            },
        }),
    )?;
    if dump_lp {
        out.write("mechanism.lp", &write_lp(&v.instance))?;
    }
    println!("types: {}", v.instance.m);
    println!("lp objective: {:.8}", c.lp_objective);
    println!("best nested menu: {} profit {:.8}", list(&v.nested.chain), c.menu_profit);
    println!("gap: {:.8} (tolerance {:.6})", c.gap, c.tolerance);
    println!("constraint generation: {} rounds, {} incentive constraints", v.lp.rounds, v.lp.ic_constraints);
    if let Some(s) = c.stochastic {
        println!("lp optimum uses lotteries: {s}");
    }
    println!("verdict: {}", c.verdict);
    if c.verdict == Verdict::Inconclusive {
        return Err(CliError::Invalid("nested menu beats the LP optimum beyond tolerance".into()));
    }
    Ok(())
}

/// One β of the two-item power family.
#[derive(Debug, Clone, Serialize)]
struct SweepPoint {
    beta: f64,
    undominated: Vec<Bundle>,
    nested: bool,
    menu: Vec<Bundle>,
    prices: Vec<f64>,
    quantities: Vec<f64>,
    profit: f64,
    relaxed_bound: f64,
    tiers: [usize; 2],
    d_star: [f64; 3],
    union_elasticity: bool,
    revenue_equivalence_gap: Option<f64>,
    lp: Option<Comparison>,
}

fn sweep_point(beta: f64, gamma: f64, grid: usize, types: Option<usize>) -> Result<SweepPoint, CliError> {
    let spec = power_pair(beta, gamma, grid)?;
    let profiles = Profiles::compute(&spec);
    let dom = build_dominance(&profiles);
    let (menu, prices, quantities, profit, re_gap) = if dom.nested {
        let m = minimal_menu(&spec, &profiles, &dom)?;
        let sim = evaluate_menu(&spec, &m.options());
        (
            m.bundles(),
            m.tiers.iter().map(|t| t.price).collect(),
            m.tiers.iter().map(|t| t.quantity).collect(),
            m.profit,
            Some(sim.revenue_equivalence_gap()),
        )
    } else {
        let best = best_nested_menu(&spec)?;
        (
            best.bundles.clone(),
            best.options.iter().map(|o| o.1).collect(),
            best.quantities.clone().unwrap_or_default(),
            best.profit,
            None,
        )
    };
    let lp = match types {
        Some(m) => Some(lp_verify(&spec, m)?.comparison),
        None => None,
    };
    Ok(SweepPoint {
        beta,
        tiers: [tier(&dom.undominated, 0), tier(&dom.undominated, 1)],
        undominated: dom.undominated.clone(),
        nested: dom.nested,
        menu,
        prices,
        quantities,
        profit,
        relaxed_bound: relaxed_bound(&spec),
        d_star: [profiles.d_star(Bundle(1)), profiles.d_star(Bundle(2)), profiles.d_star(Bundle(3))],
        union_elasticity: check_union_elasticity(&spec).holds,
        revenue_equivalence_gap: re_gap,
        lp,
    })
}

fn run_sweep(gamma: f64, betas: &[f64], grid: usize, types: Option<usize>) -> Result<Vec<SweepPoint>, CliError> {
    betas.par_iter().map(|&b| sweep_point(b, gamma, grid, types)).collect()
}

fn sweep_table(points: &[SweepPoint], with_lp: bool) -> Table {
    let mut header = vec![
        "beta",
        "undominated",
        "nested",
        "menu",
        "prices",
        "quantities",
        "profit",
        "relaxed_bound",
        "r1",
        "r2",
        "size",
        "d_star_1",
        "d_star_2",
        "d_star_12",
        "union_elasticity",
    ];
    if with_lp {
        header.extend(["lp_objective", "nested_profit_lp", "gap", "tolerance", "verdict"]);
    }
    let mut t = Table::new(&header);
    for p in points {
        let mut row = vec![
            num(p.beta),
            list(p.undominated.iter().map(|b| b.label())),
            p.nested.to_string(),
            list(p.menu.iter().map(|b| b.label())),
            list(p.prices.iter().map(|&x| num(x))),
            list(p.quantities.iter().map(|&x| num(x))),
            num(p.profit),
            num(p.relaxed_bound),
            p.tiers[0].to_string(),
            p.tiers[1].to_string(),
            p.undominated.len().to_string(),
            num(p.d_star[0]),
            num(p.d_star[1]),
            num(p.d_star[2]),
            p.union_elasticity.to_string(),
        ];
        if with_lp {
            match &p.lp {
                Some(c) => row.extend([
                    num(c.lp_objective),
                    num(c.menu_profit),
                    num(c.gap),
                    num(c.tolerance),
                    c.verdict.to_string(),
                ]),
                None => row.extend(std::iter::repeat_n(String::new(), 5)),
            }
        }
        t.row(row);
    }
    t
}

fn family_provenance(gamma: f64, betas: &[f64], grid: usize) -> Provenance {
    let doc = power_pair(betas[0], gamma, grid).map(|s| s.to_document());
    let text = format!("power_pair gamma={gamma} beta={:?} first={}", betas, serde_json::to_string(&doc.ok()).unwrap_or_default());
    Provenance::new(text.as_bytes(), grid)
}

pub fn sweep(gamma: f64, range: (f64, f64, f64), types: Option<usize>, common: &Common) -> Result<(), CliError> {
    let out = sink(common)?;
    let grid = grid_override(common).unwrap_or(DEFAULT_GRID);
    let betas = parameter_grid(range.0, range.1, range.2);
    let points = run_sweep(gamma, &betas, grid, types)?;
    let prov = family_provenance(gamma, &betas, grid);
    let table = sweep_table(&points, types.is_some());
    out.csv("sweep.csv", &table, &prov)?;
    out.json("sweep.json", &points)?;
    if out.dir().is_none() {
        print!("{}", table.render(&prov));
    } else {
        print_regions(gamma, &points);
    }
    Ok(())
}

fn print_regions(gamma: f64, points: &[SweepPoint]) {
    println!("gamma = {gamma}");
    let mut i = 0;
    while i < points.len() {
        let mut j = i;
        while j + 1 < points.len() && points[j + 1].undominated == points[i].undominated {
            j += 1;
        }
        let p = &points[i];
        let kind = if p.nested { "minimal menu" } else { "not nested; undominated" };
        println!("  beta in [{}, {}]: {kind} {}", points[i].beta, points[j].beta, list(&p.undominated));
        i = j + 1;
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QualityDoc {
    qualities: Vec<f64>,
    costs: Vec<f64>,
    distribution: TypeDistribution,
    /// Values per quality; `x·t` when omitted.
    #[serde(default)]
    values: Option<Vec<ValueExpr>>,
    #[serde(default)]
    grid_size: Option<usize>,
}

fn parse_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(T, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let doc = serde_json::from_slice(&bytes).map_err(|e| CliError::Model(Error::Schema(e.to_string())))?;
    Ok((doc, bytes))
}

pub fn quality(path: &Path, common: &Common) -> Result<(), CliError> {
    let (doc, bytes): (QualityDoc, _) = parse_doc(path)?;
    let out = sink(common)?;
    let grid = grid_override(common).or(doc.grid_size).unwrap_or(DEFAULT_GRID);
    let problem = match doc.values {
        None => QualityProblem::multiplicative(doc.qualities, doc.costs, doc.distribution, grid),
        Some(values) => QualityProblem {
            qualities: doc.qualities,
            values,
            costs: doc.costs,
            distribution: doc.distribution,
            grid_size: grid,
            multiplicative: false,
        },
    };
    let prov = Provenance::new(&bytes, grid);
    let dhat = quality_menu_via_dhat(&problem)?;
    let ccheck = if problem.multiplicative {
        match quality_menu_via_ccheck(&problem) {
            Ok(c) => Some(c),
            Err(Error::Precondition(m)) => {
                println!("average-cost route not applicable: {m}");
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let env = &dhat.envelope;
    let mut table = Table::new(&["x", "d_star", "d_hat", "c_avg", "c_check", "in_x_star"]);
    for k in 0..env.qualities.len() {
        table.row(vec![
            num(env.qualities[k]),
            num(env.d_star[k]),
            num(env.d_hat[k]),
            num(env.c_avg[k]),
            num(env.c_check[k]),
            env.x_star.contains(&k).to_string(),
        ]);
    }
    out.csv("quality.csv", &table, &prov)?;
    out.json("quality.json", &json!({ "d_hat_route": &dhat, "c_check_route": &ccheck }))?;

    println!("x          D*          D-hat       C_avg       C-check");
    for k in 0..env.qualities.len() {
        let mark = if env.x_star.contains(&k) { " *" } else { "" };
        println!(
            "{:<10} {:<11.6} {:<11.6} {:<11.6} {:.6}{mark}",
            env.qualities[k], env.d_star[k], env.d_hat[k], env.c_avg[k], env.c_check[k]
        );
    }
    println!("X* (sales-volume envelope): {}", list(env.x_star.iter().map(|&k| env.qualities[k])));
    println!("embedded menu agrees: {}", dhat.agrees_with_menu);
    if let Some(c) = &ccheck {
        println!("X* (average-cost envelope): {}", list(c.envelope.x_star.iter().map(|&k| c.envelope.qualities[k])));
        println!("identity error: {:.3e}", c.identity_error);
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScreeningDoc {
    qualities: Vec<f64>,
    utilities: Vec<ValueExpr>,
    #[serde(default)]
    costs: Option<Vec<f64>>,
    disutilities: Vec<ValueExpr>,
    distribution: TypeDistribution,
    #[serde(default)]
    grid_size: Option<usize>,
}

pub fn screening(path: &Path, types: Option<usize>, common: &Common) -> Result<(), CliError> {
    let (doc, bytes): (ScreeningDoc, _) = parse_doc(path)?;
    let out = sink(common)?;
    let grid = grid_override(common).or(doc.grid_size).unwrap_or(DEFAULT_GRID);
    let n = doc.qualities.len();
    let problem = ScreeningProblem {
        qualities: doc.qualities,
        utilities: doc.utilities,
        costs: doc.costs.unwrap_or_else(|| vec![0.0; n]),
        disutilities: doc.disutilities,
        distribution: doc.distribution,
        grid_size: grid,
    };
    let prov = Provenance::new(&bytes, grid);
    let r = screening_optimal(&problem)?;
    let lp = match types {
        Some(m) => Some(screening_lp_check(&problem, m)?),
        None => None,
    };
    let mut table = Table::new(&["kind", "index", "d_star"]);
    for (i, d) in r.d_star_x.iter().enumerate() {
        table.row(vec!["quality".into(), (i + 1).to_string(), num(*d)]);
    }
    for (j, d) in r.d_star_y.iter().enumerate() {
        table.row(vec!["action".into(), (j + 1).to_string(), num(*d)]);
    }
    out.csv("screening.csv", &table, &prov)?;
    out.json("screening.json", &json!({ "criterion": &r, "lp": &lp }))?;

    for (i, d) in r.d_star_x.iter().enumerate() {
        println!("D*(x_{}) = {d:.8}", i + 1);
    }
    for (j, d) in r.d_star_y.iter().enumerate() {
        println!("D*(y_{}) = {d:.8}", j + 1);
    }
    println!("witness: x_{}, y_{}{}", r.x_star + 1, r.y_star + 1, if r.ties { " (ties present)" } else { "" });
    for f in &r.assumption_failures {
        println!("assumption failed: {f}");
    }
    let verdict = match r.optimal {
        Some(true) => "optimal",
        Some(false) => "not optimal",
        None => "withheld",
    };
    println!("costly screening: {verdict}");
    if let Some(l) = &lp {
        println!(
            "lp (m = {}): objective {:.6}, without actions {:.6}, damaged-good mass {:.6}, uses costly action: {}",
            l.m, l.objective, l.quality_only_objective, l.damaged_mass, l.uses_costly_action
        );
    }
    Ok(())
}

fn family(gamma: f64, grid: usize) -> impl Fn(f64) -> bundling::Result<ProblemSpec> {
    move |beta| power_pair(beta, gamma, grid)
}

pub fn reproduce_example1(types: usize, common: &Common) -> Result<(), CliError> {
    let out = sink(common)?;
    let grid = grid_override(common).unwrap_or(DEFAULT_GRID);
    let betas = parameter_grid(0.1, 2.0, 0.1);
    let mut verdicts = Table::new(&["gamma", "beta", "lp_objective", "nested_profit", "gap", "tolerance", "verdict"]);
    let mut all = Vec::new();
    for gamma in [0.5, 4.5] {
        let points = run_sweep(gamma, &betas, grid, Some(types))?;
        let prov = family_provenance(gamma, &betas, grid);
        out.csv(&format!("menus_gamma_{gamma}.csv"), &sweep_table(&points, true), &prov)?;
        let mut curves = Table::new(&["beta", "d_star_1", "d_star_2", "d_star_12"]);
        for p in &points {
            curves.row(vec![num(p.beta), num(p.d_star[0]), num(p.d_star[1]), num(p.d_star[2])]);
            let c = p.lp.expect("verdicts requested");
            verdicts.row(vec![
                num(gamma),
                num(p.beta),
                num(c.lp_objective),
                num(c.menu_profit),
                num(c.gap),
                num(c.tolerance),
                c.verdict.to_string(),
            ]);
        }
        out.csv(&format!("dstar_gamma_{gamma}.csv"), &curves, &prov)?;
        print_regions(gamma, &points);
        all.push((gamma, points));
    }
    let prov = family_provenance(0.5, &betas, grid);
    out.csv("verdicts.csv", &verdicts, &prov)?;

    let f = family(0.5, grid);
    let beta1 = transition(&f, Bundle(2), Bundle(3), 0.5, 1.0, 1e-6)?;
    let beta2 = transition(&f, Bundle(1), Bundle(3), 1.2, 1.8, 1e-6)?;
    let mut tr = Table::new(&["gamma", "transition", "beta"]);
    tr.row(vec!["0.5".into(), "separate_second_item_to_pure_bundle".into(), num(beta1)]);
    tr.row(vec!["0.5".into(), "pure_bundle_to_separate_first_item".into(), num(beta2)]);
    out.csv("transitions.csv", &tr, &prov)?;
    out.json(
        "power_pair_sweep.json",
        &json!({
            "transitions": { "beta1": beta1, "beta2": beta2 },
            "sweeps": all.iter().map(|(g, p)| json!({ "gamma": g, "points": p })).collect::<Vec<_>>(),
        }),
    )?;
    println!("transitions (gamma = 0.5): beta1 = {beta1:.6}, beta2 = {beta2:.6}");
    println!("verdicts (gamma, beta, gap, tolerance, verdict):");
    for (gamma, points) in &all {
        for p in points {
            let c = p.lp.unwrap();
            println!("  {gamma} {:<4} {:+.6} {:.6} {}", p.beta, c.gap, c.tolerance, c.verdict);
        }
    }
    Ok(())
}
