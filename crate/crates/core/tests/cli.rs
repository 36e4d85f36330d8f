use std::process::Command;

use serde_json::Value;

fn irrfib(args: &[&str]) -> (i32, String, String) {
    irrfib_env(args, &[])
}

fn irrfib_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_irrfib"));
    cmd.args(args).env_remove("IRRFIB_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("bad JSON ({e}): {s}"))
}

#[test]
fn invariants_row_as_tsv() {
    let (code, out, _) = irrfib(&["invariants", "--g", "3", "--d", "4", "--format", "tsv"]);
    assert_eq!(code, 0);
    let lines: Vec<Vec<&str>> = out.lines().map(|l| l.split('\t').collect()).collect();
    let col = |name: &str| lines[0].iter().position(|h| *h == name).unwrap();
    assert_eq!(lines[1][col("c2")], "188");
    assert_eq!(lines[1][col("chi")], "48");
    assert_eq!(lines[1][col("K2")], "388");
    assert_eq!(lines[1][col("tau")], "4");
}

#[test]
fn invariants_json_uses_decimal_strings() {
    let (code, out, _) = irrfib(&["invariants", "--g", "2", "--d", "3"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["K2"], "-3");
    assert_eq!(v["delta"], "1/3");
    assert_eq!(v["general_type_preconditions_fail"], true);
}

#[test]
fn invariants_table() {
    let (code, out, _) = irrfib(&["invariants", "table", "--g", "3", "--d-range", "3:20", "--format", "tsv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 19);
    let (code, out, _) = irrfib(&["invariants", "table", "--g", "3", "--d-range", "3:5"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out).as_array().unwrap().len(), 3);
}

#[test]
fn irregular_monodromy_matrix() {
    let (code, out, _) = irrfib(&["monodromy", "--g", "3", "--d", "2", "--case", "irregular"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let rows: Vec<Vec<i64>> = v["matrix"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect())
        .collect();
    assert_eq!(
        rows,
        vec![
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, -1],
            vec![0, 0, -1, 0, 1, -1],
            vec![0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 0, -1],
        ]
    );
    assert_eq!(v["invariants"]["unipotent"], false);
}

#[test]
fn unsupported_monodromy_is_a_domain_error() {
    let (code, _, err) = irrfib(&["monodromy", "--g", "3", "--d", "3", "--case", "irregular"]);
    assert_eq!(code, 1);
    assert_eq!(json(err.trim())["error"], "UnsupportedCombination");
}

#[test]
fn check_passes() {
    let (code, out, _) = irrfib(&["check", "--d-range", "3:100", "--format", "tsv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("all identities passed"));
}

#[test]
fn modular_data() {
    let (code, out, _) = irrfib(&["modular", "--d", "7"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["genus"].as_str(), v["cusps"].as_str()), (Some("3"), Some("24")));
    let (_, out, _) = irrfib(&["modular", "--d-range", "3:5", "--format", "tsv"]);
    assert_eq!(out, "d\tdelta\tgenus\tcusps\n3\t1/3\t0\t4\n4\t1/2\t0\t6\n5\t1\t0\t12\n");
}

#[test]
fn period_matrix_output() {
    let (code, out, err) = irrfib(&["period", "--g", "3", "--d", "3", "--Z", r#"[[["0","1"],["0","0"]],[["0","0"],["0","1"]]]"#, "--z", "0,1"]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    let im = |i: usize, j: usize| v["T"][i][j][1].as_str().unwrap().parse::<f64>().unwrap();
    assert!((im(0, 0) - 1.0).abs() < 1e-12);
    assert!((im(1, 1) - 1.0 / 9.0).abs() < 1e-12);
    assert!((im(2, 2) - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["restriction_type"], "(1,3)");
}

#[test]
fn period_rejects_real_z() {
    let (code, _, err) = irrfib(&["period", "--g", "2", "--d", "3", "--Z", "[[[0,1]]]", "--z", "0.5,0"]);
    assert_eq!(code, 1);
    assert_eq!(json(err.trim())["error"], "InvalidPeriodData");
}

#[test]
fn tolerance_from_environment() {
    let args = ["period", "--g", "2", "--d", "3", "--Z", "[[[0,1]]]", "--z", "0,1"];
    assert_eq!(irrfib_env(&args, &[("IRRFIB_TOL", "1e-9")]).0, 0);
    let (code, _, err) = irrfib_env(&args, &[("IRRFIB_TOL", "-1")]);
    assert_eq!(code, 1, "{err}");
    let mut with_flag = args.to_vec();
    with_flag.extend(["--tol", "1e-12"]);
    assert_eq!(irrfib_env(&with_flag, &[("IRRFIB_TOL", "-1")]).0, 0);
}

#[test]
fn polarization_of_a_gram_matrix() {
    let gram = r#"[[0,0,1,0],[0,0,0,6],[-1,0,0,0],[0,-6,0,0]]"#;
    let (code, out, _) = irrfib(&["polarization", "--gram", gram]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["display"], "(1,6)");
    assert_eq!(v["associated_degree"], "6");
    assert_eq!(v["det"], "36");
    let (code, _, err) = irrfib(&["polarization", "--gram", "[[0,1],[1,0]]"]);
    assert_eq!(code, 1);
    assert_eq!(json(err.trim())["error"], "NotAlternating");
}

#[test]
fn distinguish_defaults_to_level_two() {
    let (code, out, _) = irrfib(&["distinguish"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "Distinguished");
    let id = r#"[[1,0],[0,1]]"#;
    let (_, out, _) = irrfib(&["distinguish", "--a", id, "--b", id, "--format", "tsv"]);
    assert!(out.starts_with("Inconclusive"));
}

#[test]
fn adapted_basis_from_file() {
    let (problem, _) = irrfib::adapted::canonical_configuration(3, 4);
    let path = std::env::temp_dir().join(format!("irrfib-problem-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&problem).unwrap()).unwrap();
    let (code, out, err) = irrfib(&["adapted-basis", "--input", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    assert_eq!(v["report"]["spans_u"], true);
    assert_eq!(v["report"]["abelian_symplectic"], true);
    assert_eq!(v["report"]["elliptic_symplectic"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(irrfib(&[]).0, 2);
    assert_eq!(irrfib(&["check", "--nope"]).0, 2);
    assert_eq!(irrfib(&["invariants", "--g", "3", "--d", "x"]).0, 2);
    assert_eq!(irrfib(&["--help"]).0, 0);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["invariants", "table", "--g", "2", "--d-range", "3:30"],
        vec!["distinguish", "--format", "tsv"],
        vec!["monodromy", "--g", "2", "--d", "5"],
    ] {
        assert_eq!(irrfib(&args), irrfib(&args));
    }
}
