use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pascal-adic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("pascal-adic-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn word_prints_the_block() {
    let out = run(&["word", "--n", "6", "--k", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "aaabaababbaababbabbb\n");
}

#[test]
fn word_refuses_beyond_the_cap() {
    let out = run(&["word", "--n", "40", "--k", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceeds cap"));
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(
        run(&["word", "--n", "3", "--k", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["blancmange", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "fig9"]).status.code(), Some(2));
}

#[test]
fn curve_csv_has_header_and_vertices() {
    let out = run(&["curve", "--n", "6", "--k", "3", "--out", "csv"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,value");
    assert_eq!(lines.len(), 22);
    assert_eq!(lines[21], "1,0");
}

#[test]
fn exact_flag_prints_fractions() {
    let out = run(&[
        "array",
        "--kind",
        "canonical",
        "--p",
        "1/2",
        "--m",
        "3",
        "--out",
        "json",
        "--exact",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lines"][3][0], serde_json::json!(["1/8", "3/4"]));
    assert_eq!(v["lines"][3][3], serde_json::json!(["1/8", "-3/4"]));
}

#[test]
fn blancmange_uses_twelve_digits() {
    let out = run(&["blancmange", "--p", "1/2", "--samples", "3"]);
    let text = stdout(&out);
    assert!(text.contains("0.333333333333,1.33333333"));
}

#[test]
fn towers_json_lists_rungs() {
    let out = run(&["towers", "--n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let towers = v.as_array().unwrap();
    assert_eq!(towers.len(), 5);
    assert_eq!(towers[2]["height"], 6);
    let total: usize = towers
        .iter()
        .map(|t| t["rungs"].as_array().unwrap().len())
        .sum();
    assert_eq!(total, 16);
}

#[test]
fn orbit_is_reproducible_per_seed() {
    let args = ["orbit", "--x", "0.0110", "--steps", "200", "--seed", "5"];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    assert!(a.starts_with("j,letter,sum\n0,a,0\n1,b,1\n"));
    assert_eq!(a.lines().count(), 202);
}

#[test]
fn cohomology_and_poly_read_observables() {
    let g = scratch_file(
        "g.json",
        r#"{ "level": 2, "values": ["0", "1", "-1", "0"] }"#,
    );
    let out = run(&["cohomology", "--g", g.to_str().unwrap()]);
    assert_eq!(stdout(&out), "cohomologous\nC = 0\nf = [0, 0, -1, 0]\n");
    let h = scratch_file("h.json", r#"{ "level": 1, "values": ["1", "-1"] }"#);
    let out = run(&["poly", "--g", h.to_str().unwrap(), "--exact"]);
    assert_eq!(stdout(&out), "power,coefficient\n0,0\n1,2\n2,-2\n");
    let bad = scratch_file("bad.json", r#"{ "level": 2, "values": ["1"] }"#);
    assert_eq!(
        run(&["poly", "--g", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn converge_reports_decreasing_distances() {
    let out = run(&["converge", "--p", "1/2", "--n-list", "40,80,160,320"]);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 4);
    let d: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn converge_warns_in_the_transition_regime() {
    let g = scratch_file(
        "g2.json",
        r#"{ "level": 2, "values": ["1", "-1", "-1", "1"] }"#,
    );
    let out = run(&[
        "converge",
        "--p",
        "1/2",
        "--g",
        g.to_str().unwrap(),
        "--n-list",
        "20",
    ]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("P^g(p)=0: transition regime"));
}

#[test]
fn conway_table_and_verification() {
    let text = stdout(&run(&["conway", "--max", "6"]));
    assert_eq!(text, "j,C,D\n1,1,\n2,1,\n3,2,1\n4,2,-1\n5,3,1\n6,4,1\n");
    let out = run(&["conway", "--verify-concat", "--lines", "8"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS"));
}

#[test]
fn figures_have_their_row_counts() {
    assert_eq!(stdout(&run(&["figure", "fig2"])).lines().count(), 22);
    assert_eq!(stdout(&run(&["figure", "fig5"])).lines().count(), 11);
    assert_eq!(stdout(&run(&["figure", "fig6"])).lines().count(), 4098);
    let fig4 = stdout(&run(&["figure", "fig4"]));
    let stages: std::collections::BTreeSet<&str> = fig4
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(stages.len(), 4);
}

#[test]
fn out_path_writes_a_file() {
    let path = std::env::temp_dir().join(format!("pascal-adic-{}-fig2.csv", std::process::id()));
    let out = run(&["figure", "fig2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("l,F\n0,0\n1,1\n"));
}

#[test]
fn selftest_names_the_corrupted_check() {
    let out = run(&["selftest", "--inject-fault", "12,6"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text
        .lines()
        .any(|l| l.starts_with("FAIL  2 height identity")));
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count(),
        16
    );
}

#[test]
fn selftest_reports_are_reproducible() {
    let a = run(&["selftest", "--seed", "3"]);
    let b = run(&["selftest", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
