use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polydisk_cli::report::parse_cell;
use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn polydisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polydisk"))
        .args(args)
        .output()
        .unwrap()
}

fn run(cmd: &str, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    polydisk(&args)
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const FAMILY: &str = r#"
n = 1
k = [1]
checks = ["j_symmetry"]

[symbol]
family = "j_symmetric"
a = 1.0
c = [0.5]
d = [0.1]

[caps]
block = 10
"#;

#[test]
fn symmetric_family_passes_its_check() {
    let dir = TempDir::new().unwrap();
    let out = run("check", &write(&dir, "f.toml", FAMILY), &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["version"], 1);
    let check = &report["checks"][0];
    assert_eq!(check["name"], "j_symmetry");
    assert_eq!(check["verdict"], "pass");
    assert!(check["residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(report["config"]["symbol"]["a"]["re"], 1.0);
    assert!(report["timings"]["total"].as_f64().is_some());
    assert_eq!(report["inexact_symbol"], false);
}

#[test]
fn self_map_violation_is_invalid_input() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.toml", &FAMILY.replace("d = [0.1]", "d = [0.8]"));
    let out = run("check", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-map condition violated"));
}

#[test]
fn empty_checks_echo_the_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "e.toml",
        &FAMILY.replace(r#"checks = ["j_symmetry"]"#, "checks = []"),
    );
    let out = run("check", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["checks"].as_array().unwrap().len(), 0);
    assert_eq!(report["config"]["n"], 1);
}

#[test]
fn failing_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let text = FAMILY.replace("a = 1.0", "a = [1.0, 1.0]").replace(
        r#"checks = ["j_symmetry"]"#,
        r#"checks = ["j_symmetry", "hermitian"]"#,
    );
    let out = run("check", &write(&dir, "h.toml", &text), &[]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["checks"][0]["verdict"], "pass");
    assert_eq!(report["checks"][1]["verdict"], "fail");
    assert_eq!(report["passed"], false);
}

#[test]
fn unknown_fields_and_bad_families_are_rejected() {
    let dir = TempDir::new().unwrap();
    let out = run(
        "check",
        &write(&dir, "u.toml", &format!("{FAMILY}\nextra = 1\n")),
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    let text = FAMILY
        .replace("j_symmetric", "hermitian")
        .replace("a = 1.0", "a = [1.0, 0.5]");
    let out = run("check", &write(&dir, "c.toml", &text), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("must be real"));
    let out = run("check", &dir.path().join("missing.toml"), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn echoed_config_reproduces_the_residuals() {
    let dir = TempDir::new().unwrap();
    let text = FAMILY
        .replace("c = [0.5]", "c = [{re = 0.2, im = -0.3}]")
        .replace(
            r#"checks = ["j_symmetry"]"#,
            r#"checks = ["j_symmetry", "normal", "norms", "classify"]"#,
        );
    let first = stdout_json(&run("check", &write(&dir, "r.toml", &text), &[]));
    let echo = write(&dir, "echo.json", &first["config"].to_string());
    let second = stdout_json(&run("check", &echo, &[]));
    assert_eq!(first["checks"], second["checks"]);
    assert_eq!(first["norms"], second["norms"]);
    assert_eq!(second["classification"]["form"], "j_symmetric");
}

#[test]
fn flags_override_the_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "f.toml", FAMILY);
    let report_path = dir.path().join("report.json");
    let out = run(
        "check",
        &cfg,
        &[
            "--caps",
            "6",
            "--tol",
            "1e-3",
            "--jobs",
            "1",
            "--out",
            report_path.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["caps"]["block"], serde_json::json!([6]));
    assert_eq!(report["config"]["tolerances"]["symmetry"], 1e-3);
}

fn read_matrix(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn matrix_dump_of_a_family_spec() {
    let dir = TempDir::new().unwrap();
    let out = run("matrix", &write(&dir, "f.toml", FAMILY), &["--caps", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let table = read_matrix(&String::from_utf8_lossy(&out.stdout));
    assert_eq!(table[0], ["j\\m", "0", "1", "2", "3", "4"]);
    assert_eq!(table[3][0], "2");
    let cell = |j: usize, m: usize| parse_cell(&table[j + 1][m + 1]).unwrap();
    assert_eq!(cell(2, 1).re, 1.0);
    assert_eq!(cell(1, 2).re, 1.0);
    for j in 0..=4 {
        assert_eq!(cell(j, 0).norm(), 0.0);
    }
    assert_eq!(table[1][1], "0.0000000000000000e0+0.0000000000000000e0i");
}

#[test]
fn matrix_dump_of_the_identity() {
    let dir = TempDir::new().unwrap();
    let text = r#"
n = 2
k = [0, 0]
[symbol]
family = "explicit_series"
u = { caps = [0, 0], coeffs = [1.0] }
v = [[0.0, 1.0], [0.0, 1.0]]
[caps]
rows = [2, 1]
cols = [2, 1]
"#;
    let cfg = write(&dir, "i.toml", text);
    let check = stdout_json(&run("check", &cfg, &[]));
    assert_eq!(check["inexact_symbol"], true);
    let out = run("matrix", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let table = read_matrix(&String::from_utf8_lossy(&out.stdout));
    assert_eq!(table[0][1..], ["0.0", "0.1", "1.0", "1.1", "2.0", "2.1"]);
    for j in 0..6 {
        for m in 0..6 {
            let z = parse_cell(&table[j + 1][m + 1]).unwrap();
            assert_eq!(z.re, if j == m { 1.0 } else { 0.0 });
            assert_eq!(z.im, 0.0);
        }
    }
}

#[test]
fn kernel_report_flags_the_degree_count() {
    let dir = TempDir::new().unwrap();
    let text = r#"
n = 2
k = [1, 1]
[symbol]
family = "j_symmetric"
a = [1.0, 0.5]
c = [0.2, [0.0, -0.1]]
d = [0.4, 0.3]
[caps]
block = 4
"#;
    let out = run("kernel", &write(&dir, "k.toml", text), &[]);
    assert_eq!(out.status.code(), Some(0));
    let k = &stdout_json(&out)["kernel"];
    assert_eq!(k["dim_computed"], 9);
    assert_eq!(k["dim_derived_claim"], 9);
    assert_eq!(k["dim_paper_claim"], 3);
    assert_eq!(k["dim_adjoint"], 9);
    assert_eq!(k["paper_discrepancy"], true);
    assert_eq!(k["basis"].as_array().unwrap().len(), 9);
}

const SWEEP: &str = r#"
n = 1
k = [1]
checks = ["j_symmetry"]
[symbol]
family = "j_symmetric"
a = 1.0
c = [0.0]
d = [0.1]
[[sweep]]
param = "c"
values = [0.0, 0.1, 0.2, 0.3, 0.4]
"#;

#[test]
fn sweep_rows_pass_in_order() {
    let dir = TempDir::new().unwrap();
    let out = run("sweep", &write(&dir, "s.toml", SWEEP), &[]);
    assert_eq!(out.status.code(), Some(0));
    let table = read_matrix(&String::from_utf8_lossy(&out.stdout));
    assert_eq!(
        table[0],
        [
            "c",
            "status",
            "message",
            "j_symmetry_residual",
            "j_symmetry_verdict"
        ]
    );
    assert_eq!(table.len(), 6);
    assert_eq!(table[3][0], "0.2+0i");
    assert!(table[1..].iter().all(|r| r[1] == "pass" && r[4] == "pass"));
}

#[test]
fn sweep_marks_invalid_points_and_continues() {
    let dir = TempDir::new().unwrap();
    let text = SWEEP.replace("values = [0.0, 0.1, 0.2, 0.3, 0.4]", "values = [0.1, 0.8]")
        + "\n[[sweep]]\nparam = \"d\"\nvalues = [0.1, 0.5]\n";
    let out = run("sweep", &write(&dir, "s.toml", &text), &[]);
    assert_eq!(out.status.code(), Some(0));
    let table = read_matrix(&String::from_utf8_lossy(&out.stdout));
    let status: Vec<&str> = table[1..].iter().map(|r| r[2].as_str()).collect();
    assert_eq!(status, ["pass", "pass", "pass", "invalid"]);
    assert!(table[4][3].contains("self-map condition violated"));
}

#[test]
fn empty_grid_is_an_error() {
    let dir = TempDir::new().unwrap();
    let out = run("sweep", &write(&dir, "e.toml", FAMILY), &[]);
    assert_eq!(out.status.code(), Some(2));
    let text = SWEEP.replace("values = [0.0, 0.1, 0.2, 0.3, 0.4]", "values = []");
    let out = run("sweep", &write(&dir, "v.toml", &text), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_lists_without_running() {
    let out = polydisk(&["verify", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 9);
    assert!(text.starts_with("1 j_symmetry"));
}

#[test]
fn corrupted_tolerance_fails_verify() {
    let out = polydisk(&["verify", "--tol-scale", "1e-30", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL]"));
}
