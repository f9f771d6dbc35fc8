use bundling::applications::{quality_menu_via_ccheck, quality_menu_via_dhat, QualityProblem};
use bundling::demand::Profiles;
use bundling::dominance::build_dominance;
use bundling::lp::verify;
use bundling::menu::minimal_menu;
use bundling::model::TypeDistribution;

// Cheap quadratic technology for low qualities and a fixed-cost linear one
// for high qualities: average cost rises, then falls.
fn two_technologies() -> QualityProblem {
    let xs: Vec<f64> = (1..=8).map(|k| 0.5 * k as f64).collect();
    let costs = xs.iter().map(|&x: &f64| 0.3 * (x * x).min(4.0 + x)).collect();
    QualityProblem::multiplicative(xs, costs, TypeDistribution::uniform(0.0, 1.0), 2049)
}

#[test]
fn mixed_technology_drops_middle_qualities() {
    let p = two_technologies();
    let dhat = quality_menu_via_dhat(&p).unwrap();
    let ccheck = quality_menu_via_ccheck(&p).unwrap();
    let picked: Vec<f64> = dhat.envelope.x_star.iter().map(|&k| p.qualities[k]).collect();
    assert_eq!(picked, vec![0.5, 1.0, 1.5, 2.0, 4.0]);
    assert_eq!(ccheck.envelope.x_star, dhat.envelope.x_star);
    assert!(ccheck.identity_error < 1e-8);
    assert!(dhat.agrees_with_menu, "{:?}", dhat.menu_qualities);
    // 1.5 and 2 are undominated but carry no extra profit: the minimal menu is 0.5, 1, 4.
    assert_eq!(dhat.menu_qualities, vec![0, 1, 7]);
    // Qualities 2.5 to 3.5 have increasing average cost locally yet are excluded.
    let c = p.average_costs();
    assert!(c[4] > c[3] && c[5] < c[4]);
}

#[test]
fn embedded_menu_matches_lp() {
    let p = two_technologies();
    let spec = p.embed().unwrap();
    let profiles = Profiles::compute(&spec);
    let menu = minimal_menu(&spec, &profiles, &build_dominance(&profiles)).unwrap();
    let v = verify(&spec, 101).unwrap();
    assert!((v.lp.objective - menu.profit).abs() <= v.instance.tolerance());
    assert!(v.comparison.gap.abs() <= v.instance.tolerance());
}
