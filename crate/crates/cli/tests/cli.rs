use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fracvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn parse_csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    (
        header,
        lines
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect(),
    )
}

#[test]
fn solve_writes_self_consistent_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = fracvar(&["solve", "--problem", "ex1", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut max_err = Vec::new();
    for n in [3, 6] {
        let (header, rows) = parse_csv(&dir.path().join(format!("ex1_n{n}.csv")));
        assert_eq!(header, "x,y_n,y_exact,error");
        assert_eq!(rows.len(), 200);
        let mut worst = 0.0f64;
        for (j, row) in rows.iter().enumerate() {
            let v: Vec<f64> = row.iter().map(|s| s.parse().unwrap()).collect();
            assert_eq!(v[0], (j + 1) as f64 / 200.0);
            // Columns round-trip exactly, so the error column is reproducible bit for bit.
            assert_eq!(v[3], v[1] - v[2]);
            worst = worst.max(v[3].abs());
        }
        max_err.push(worst);
    }
    assert!(max_err[1] < max_err[0]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["problem"], "ex1");
    assert_eq!(report["runs"].as_array().unwrap().len(), 2);
    assert!(report["runs"][1]["objective_gap"].as_f64().unwrap().abs() <= 1e-10);
    let text = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(text.contains("x = a is excluded"));
}

#[test]
fn remark3_report_shows_the_constant() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracvar(&[
        "solve",
        "--problem",
        "remark3",
        "--degrees",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(text.contains("c[0] = 1.12837916709551"), "{text}");
    assert!(
        text.contains("objective value      1.0000000000000000e0")
            || text.contains("9.99999999999999")
    );
}

#[test]
fn convergence_tables() {
    let o = fracvar(&[
        "convergence",
        "--problem",
        "remark3",
        "--degrees",
        "0,1,2,3",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,max_interior_error,objective_value,objective_gap,solve_time_ms")
    );
    for line in lines {
        let err: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(err <= 1e-8, "{line}");
    }

    let o = fracvar(&[
        "convergence",
        "--problem",
        "ex3",
        "--alpha",
        "0.75",
        "--epsilon",
        "1",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    let gaps: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 2);
    assert!(gaps[1] <= gaps[0]);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "problem = ex2\nepsilon = -1\ndegrees = 2\ntiming = off\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let base = String::from_utf8(fracvar(&["convergence", "--config", cfg]).stdout).unwrap();
    let over =
        String::from_utf8(fracvar(&["convergence", "--config", cfg, "--degrees", "4"]).stdout)
            .unwrap();
    assert!(base.lines().nth(1).unwrap().starts_with("2,"));
    assert!(over.lines().nth(1).unwrap().starts_with("4,"));
    assert!(base.lines().nth(1).unwrap().ends_with(",0.000000"));
}

#[test]
fn custom_problem_matches_builtin() {
    let p = "-5*x^4/(1+x^5)^2";
    let args = [
        "--problem",
        "custom",
        "--alpha",
        "0.5",
        "--epsilon",
        "1",
        "--g",
        "1/(1+x^5)",
        "--h",
        "1/(1+x^5)",
        "--gp",
        p,
        "--hp",
        p,
    ];
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let mut full = vec!["solve", "--out", out, "--degrees", "4"];
    full.extend_from_slice(&args);
    assert_eq!(code(&fracvar(&full)), 0);
    let (_, rows) = parse_csv(&dir.path().join("custom_n4.csv"));
    // No exact solution for custom problems: those columns stay empty.
    assert!(rows.iter().all(|r| r[2].is_empty() && r[3].is_empty()));
    assert_eq!(
        code(&fracvar(&[
            "solve",
            "--out",
            out,
            "--degrees",
            "4",
            "--problem",
            "ex1"
        ])),
        0
    );
    let (_, builtin) = parse_csv(&dir.path().join("ex1_n4.csv"));
    for (c, b) in rows.iter().zip(&builtin) {
        let (yc, yb): (f64, f64) = (c[1].parse().unwrap(), b[1].parse().unwrap());
        assert!((yc - yb).abs() <= 1e-12 * yb.abs().max(1.0), "{yc} vs {yb}");
    }

    let mut conv = vec!["convergence"];
    conv.extend_from_slice(&args);
    assert_eq!(code(&fracvar(&conv)), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&fracvar(&[
            "solve",
            "--problem",
            "remark3",
            "--a",
            "1",
            "--b",
            "0"
        ])),
        1
    );
    assert_eq!(code(&fracvar(&["convergence", "--degrees", ""])), 1);
    assert_eq!(code(&fracvar(&["convergence", "--problem", "nope"])), 1);
    assert_eq!(code(&fracvar(&["convergence", "--alpha", "abc"])), 1);
    assert_eq!(code(&fracvar(&["frobnicate"])), 1);
    assert_eq!(code(&fracvar(&["--help"])), 0);
    // More unknowns than quadrature nodes leaves the normal matrix singular.
    assert_eq!(
        code(&fracvar(&[
            "convergence",
            "--problem",
            "ex1",
            "--degrees",
            "30",
            "--quad",
            "10"
        ])),
        2
    );
}

#[test]
fn verify_passes_and_detects_perturbation() {
    let o = fracvar(&["verify"]);
    assert_eq!(code(&o), 0);
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(!table.contains("FAIL"));
    let o = fracvar(&["verify", "--perturb-gamma-ratio", "1e-6"]);
    assert_eq!(code(&o), 3);
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table
        .lines()
        .any(|l| l.starts_with("fractional derivative") && l.ends_with("FAIL")));
}
