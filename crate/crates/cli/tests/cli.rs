use assert_cmd::Command;

fn twotrees() -> Command {
    let mut cmd = Command::cargo_bin("twotrees").unwrap();
    cmd.env_remove("TWOTREES_ORACLE_MAX");
    cmd
}

fn stdout(args: &[&str]) -> String {
    let out = twotrees()
        .args(args)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    String::from_utf8(out).unwrap()
}

fn values(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('\t').nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn molexp_plane() {
    let out = stdout(&["molexp", "--family", "plane", "--max-degree", "5"]);
    assert_eq!(
        out.trim(),
        "1 + X + E2(X) + X^3 + X*C3(X) + 2*E2(X^2) + X^4 + 6*X^5"
    );
    let out = stdout(&["molexp", "--family", "plane", "--max-degree", "0"]);
    assert_eq!(out.trim(), "1");
}

#[test]
fn molexp_planar_contains_x_e3() {
    let out = stdout(&["molexp", "--family", "planar", "--max-degree", "5"]);
    assert!(out.contains("X*E3(X)"), "{out}");
}

#[test]
fn molexp_csv_and_json() {
    let csv = stdout(&["molexp", "--max-degree", "3", "--format", "csv"]);
    assert!(csv.starts_with("degree,tag,coeff\n"));
    assert!(csv.contains("2,\"E2(X)\",1"));
    let json = stdout(&["molexp", "--max-degree", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["family"], "plane");
}

#[test]
fn count_examples() {
    let planar = stdout(&[
        "count",
        "--family",
        "planar",
        "--mode",
        "unlabelled",
        "--n-max",
        "6",
        "--route",
        "formula",
    ]);
    assert_eq!(values(&planar), ["1", "1", "1", "1", "3", "4", "12"]);
    let oracle = stdout(&[
        "count",
        "--family",
        "planar",
        "--mode",
        "unlabelled",
        "--n-max",
        "6",
        "--route",
        "oracle",
    ]);
    assert_eq!(values(&oracle), values(&planar));

    let plane = stdout(&[
        "count",
        "--family",
        "plane",
        "--pointing",
        "triangle",
        "--mode",
        "unlabelled",
        "--n",
        "4",
    ]);
    assert_eq!(plane, "4\t10\n");
    let planar = stdout(&[
        "count",
        "--family",
        "planar",
        "--pointing",
        "triangle",
        "--mode",
        "unlabelled",
        "--n",
        "4",
    ]);
    assert_eq!(planar, "4\t6\n");
}

#[test]
fn count_csv_columns() {
    let out = stdout(&["count", "--n", "3", "--route", "series", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,family,pointing,mode,value,route"));
    assert_eq!(lines.next(), Some("3,plane,none,unlabelled,1,series"));
}

#[test]
fn json_is_reproducible() {
    let args = [
        "count",
        "--family",
        "planar",
        "--pointing",
        "edge",
        "--mode",
        "labelled",
        "--n-max",
        "8",
        "--format",
        "json",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    let args = [
        "verify",
        "--suite",
        "dissymmetry",
        "--cap",
        "12",
        "--format",
        "json",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn usage_errors_exit_2() {
    twotrees()
        .args(["count", "--n", "13", "--route", "oracle"])
        .assert()
        .code(2);
    twotrees()
        .args(["count", "--n", "3", "--route", "oracle"])
        .env("TWOTREES_ORACLE_MAX", "nope")
        .assert()
        .code(2);
    twotrees()
        .args([
            "count",
            "--family",
            "planar",
            "--pointing",
            "edge",
            "--mode",
            "asymmetric",
            "--n",
            "3",
        ])
        .assert()
        .code(2);
    twotrees()
        .args(["count", "--family", "cubic", "--n", "3"])
        .assert()
        .code(2);
    twotrees().args(["count"]).assert().code(2);
    twotrees().args(["molexp", "--bogus"]).assert().code(2);
}

#[test]
fn oracle_bound_can_be_raised() {
    let out = twotrees()
        .args(["count", "--n", "13", "--route", "oracle"])
        .env("TWOTREES_ORACLE_MAX", "13")
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let canonical = stdout(&["count", "--n", "13", "--route", "canonical"]);
    assert_eq!(String::from_utf8(out).unwrap(), canonical);
}

#[test]
fn verify_dissymmetry() {
    twotrees()
        .args(["verify", "--suite", "dissymmetry", "--cap", "30"])
        .assert()
        .code(0);
}

#[test]
fn verify_oracle_reports_known_discrepancies() {
    let out = stdout(&[
        "verify", "--suite", "oracle", "--n-max", "10", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let known: Vec<_> = v["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|d| d["known"] == true)
        .collect();
    assert!(known.len() >= 2);
    assert!(known.iter().any(|d| d["item"] == "X^2*E2(X^2)"));
}

#[test]
fn verify_formulas_wide() {
    twotrees()
        .args(["verify", "--suite", "formulas", "--n-max", "50"])
        .assert()
        .code(0);
}
