use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bundling")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn error_json(o: &Output) -> serde_json::Value {
    let err = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(err.lines().last().unwrap()).expect("stderr ends with error JSON")
}

#[test]
fn analyze_reports_dominance() {
    let o = run(&["analyze", "--spec", data("power_pair.json").to_str().unwrap(), "--grid", "2049"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("undominated: {2} {1,2}"), "{s}");
    assert!(s.contains("nested: true"));
}

#[test]
fn hasse_for_three_items_is_a_chain() {
    let o = run(&["analyze", "--spec", data("three_items.json").to_str().unwrap(), "--hasse"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    let bold: Vec<&str> = dot.lines().filter(|l| l.contains("peripheries=2")).collect();
    assert_eq!(bold.len(), 3);
    for label in ["\"[2]\"", "\"[1,2]\"", "\"[1,2,3]\""] {
        assert!(bold.iter().any(|l| l.trim_start().starts_with(label)), "{label} missing");
    }
}

#[test]
fn solve_confirms_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("power_pair.json");
    let o = run(&["solve", "--spec", spec.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("certificate: CONFIRMED"));
    let csv = fs::read_to_string(dir.path().join("menu.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# spec_sha256=") && lines[0].ends_with("grid=4097"));
    assert_eq!(lines[1], "tier,bundle,quantity,cutoff,price,upgrade_price");
    assert!(lines[2].starts_with("1,[2],"));
    assert!(lines[3].starts_with("2,\"[1,2]\","));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("solve.json")).unwrap()).unwrap();
    assert_eq!(json["certificate"], "CONFIRMED");
}

#[test]
fn solve_csv_on_stdout() {
    let o = run(&["solve", "--spec", data("power_pair.json").to_str().unwrap(), "--csv", "--types", "0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().next().unwrap().starts_with("# spec_sha256="));
    assert_eq!(s.lines().count(), 4);
}

#[test]
fn non_nested_certificate_is_invalid() {
    let o = run(&["solve", "--spec", data("power_pair_unnested.json").to_str().unwrap(), "--types", "51"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_json(&o)["error"], "certificate_invalid");
}

#[test]
fn invalid_spec_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"n_items":2,"distribution":{"kind":"uniform","lo":0,"hi":1},
            "values":{"[1]":{"terms":[{"coef":1,"exp":1}]},"[1,2]":{"terms":[{"coef":0.5,"exp":1}]}}}"#,
    )
    .unwrap();
    let o = run(&["analyze", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "not_monotone_inclusion");

    fs::write(&path, r#"{"n_items":1,"bogus":true}"#).unwrap();
    let o = run(&["analyze", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "schema");

    let o = run(&["analyze", "--spec", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "input");
}

#[test]
fn verify_dumps_lp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["verify", "--spec", data("power_pair.json").to_str().unwrap(), "--types", "31", "--dump-lp", "--out", out]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict: CONFIRMED"));
    let lp = fs::read_to_string(dir.path().join("mechanism.lp")).unwrap();
    assert!(lp.contains("Subject To") && lp.trim_end().ends_with("End"));
    assert_eq!(lp.matches(" ic_").count(), 31 * 30);
    let o = run(&["verify", "--spec", data("power_pair.json").to_str().unwrap(), "--dump-lp"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&[
            "sweep",
            "--gamma",
            "0.5",
            "--beta-range",
            "0.2:1.8:0.2",
            "--grid",
            "1025",
            "--types",
            "31",
            "--format",
            "csv,json",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    for f in ["sweep.csv", "sweep.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
    let csv = fs::read_to_string(a.path().join("sweep.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("beta,undominated,nested,menu"));
    assert_eq!(csv.lines().count(), 2 + 9);
}

#[test]
fn quality_and_screening() {
    let o = run(&["quality", "--spec", data("quality.json").to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("X* (sales-volume envelope): 2 3"));
    assert!(s.contains("X* (average-cost envelope): 2 3"));

    let o = run(&["screening", "--spec", data("screening.json").to_str().unwrap(), "--grid", "1025"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("costly screening: optimal"));
}

#[test]
fn reproduce_example_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reproduce-example1", "--types", "31", "--grid", "1025", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["menus_gamma_0.5.csv", "menus_gamma_4.5.csv", "dstar_gamma_0.5.csv", "verdicts.csv", "transitions.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let verdicts = fs::read_to_string(dir.path().join("verdicts.csv")).unwrap();
    assert_eq!(verdicts.lines().count(), 2 + 40);
    assert!(stdout(&o).contains("beta in [0.1, 0.7]: minimal menu {2} {1,2}"));
}

#[test]
fn bad_flags_are_rejected() {
    let o = run(&["sweep", "--beta-range", "2:1:0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["analyze", "--spec", "x.json", "--format", "png"]);
    assert_eq!(o.status.code(), Some(2));
}
