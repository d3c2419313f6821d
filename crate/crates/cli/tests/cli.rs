use std::process::{Command, Output};

use serde_json::Value;

fn twocenter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twocenter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV table, split into fields.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(csv: &str, name: &str) -> usize {
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    header.split(',').position(|h| h == name).unwrap()
}

#[test]
fn norm_table_type_i() {
    let out = stdout(&twocenter(&["norm", "--hbar", "0.2,1,10", "--kind", "bosonic_i"]));
    assert!(out.starts_with("# hbar=0.2;1;10\n# delta=0.5\n# wtype=I\n"));
    let r = rows(&out);
    assert_eq!(r.len(), 3);
    let (lg, lin) = (column(&out, "log10_norm"), column(&out, "norm"));
    let n1: f64 = r[1][lin].parse().unwrap();
    assert!((n1 / 0.00942 - 1.0).abs() < 5e-3);
    let l0: f64 = r[0][lg].parse().unwrap();
    assert!((l0 - 3.5806e-47f64.log10()).abs() < 1e-3);
    assert_eq!(r[0][column(&out, "method")], "analytic");
}

#[test]
fn tiny_norms_leave_linear_column_empty() {
    let out = stdout(&twocenter(&["norm", "--hbar", "0.02", "--kind", "bosonic_i"]));
    let r = rows(&out);
    let lg: f64 = r[0][column(&out, "log10_norm")].parse().unwrap();
    assert!(lg < -300.0);
    assert_eq!(r[0][column(&out, "norm")], "");
}

#[test]
fn divergent_type_ii_rows_are_flagged() {
    let out = stdout(&twocenter(&["norm", "--wtype", "IIb", "--kappa", "3", "--hbar", "2"]));
    let status = column(&out, "status");
    let kinds = column(&out, "kind");
    let r = rows(&out);
    assert_eq!(r.len(), 4);
    let row = r.iter().find(|r| r[kinds] == "bosonic_ii_sector2").unwrap();
    assert_eq!(row[status], "ok");
    let n: f64 = row[column(&out, "norm")].parse().unwrap();
    assert!((n / 473.903 - 1.0).abs() < 1e-2);
    assert!(r.iter().any(|r| r[status] == "divergent"));
}

#[test]
fn output_is_deterministic() {
    let args = ["norm", "--hbar", "0.4,4", "--wtype", "IIa", "--kappa", "3"];
    assert_eq!(twocenter(&args).stdout, twocenter(&args).stdout);
}

#[test]
fn spectrum_at_equal_strengths() {
    let out = stdout(&twocenter(&["spectrum", "--delta", "1", "--hbar", "1"]));
    let (e, i, n, m) = (column(&out, "E"), column(&out, "I"), column(&out, "n"), column(&out, "m"));
    let mut energies: Vec<String> = rows(&out).iter().map(|r| r[e].clone()).collect();
    energies.dedup();
    assert_eq!(energies, ["0.000000000e0", "6.000000000e0", "7.111111111e0"]);
    assert!(rows(&out).iter().any(|r| r[n] == "0" && r[m] == "1" && r[i] == "0.000000000e0"));
    for r in rows(&out).iter().filter(|r| r[column(&out, "status")] == "ok") {
        for c in ["u_ode_residual", "razavy_residual", "v_ode_residual"] {
            let x: f64 = r[column(&out, c)].parse().unwrap();
            assert!(x <= 1e-6, "{c} = {x}");
        }
        let h: f64 = r[column(&out, "hamiltonian_residual")].parse().unwrap();
        assert!(h <= 1e-4);
    }
}

#[test]
fn spectrum_sector_filter() {
    let out = stdout(&twocenter(&["spectrum", "--delta", "1", "--sector", "-"]));
    let s = column(&out, "sector");
    let r = rows(&out);
    assert_eq!(r.len(), 12);
    assert!(r.iter().all(|r| r[s] == "-"));
}

#[test]
fn energies_below_equal_strengths() {
    let out = stdout(&twocenter(&["spectrum", "--delta", "0.5", "--format", "json"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[1]["E_razavy"], 3.375);
    assert_eq!(rows[1]["M"], 2.0);
}

#[test]
fn density_grid_shape_and_symmetry() {
    let out = stdout(&twocenter(&["density", "--delta", "1", "--grid", "-2,2,-1,1,9,5"]));
    let r = rows(&out);
    assert_eq!(r.len(), 45);
    let d = column(&out, "density");
    for j in 0..5 {
        for i in 0..9 {
            assert_eq!(r[j * 9 + i][d], r[j * 9 + 8 - i][d]);
        }
    }
}

#[test]
fn density_of_a_bound_state() {
    let out = stdout(&twocenter(&[
        "density", "--delta", "1", "--kind", "bound:1,1,+,even", "--normalize", "--grid", "-3,3,-3,3,5,5",
    ]));
    assert!(out.contains("# state=bound:1,1,+,even\n# normalized=true\n"));
    let bad = twocenter(&["density", "--delta", "1", "--kind", "bound:1,1,-,even", "--normalize"]);
    assert!(!bad.status.success());
}

#[test]
fn potential_matrix_sector() {
    let out = stdout(&twocenter(&["potential", "--sector", "1", "--grid", "-1,1,0,1,3,2"]));
    let r = rows(&out);
    assert_eq!(r.len(), 6);
    let sing = column(&out, "singular");
    assert_eq!(r[0][sing], "1");
    assert_eq!(r[1][sing], "0");
    assert_eq!(r[1].len(), 6);
}

#[test]
fn verify_default_params_pass() {
    let out = stdout(&twocenter(&["verify", "--format", "json"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let report = &v[0];
    assert_eq!(report["all_passed"], true);
    for c in report["checks"].as_array().unwrap() {
        assert!(c["tolerance"].is_number() && c["measured"].is_number(), "{c}");
    }
}

#[test]
fn invalid_delta_is_a_json_error() {
    let o = twocenter(&["verify", "--delta", "1.5"]);
    assert!(!o.status.success());
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "runtime");
    assert!(err["message"].as_str().unwrap().contains("delta"));
}

#[test]
fn usage_errors_are_json() {
    let o = twocenter(&["nope"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "usage");
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("norms.json");
    std::fs::write(&cfg, "hbar = [1.0, 10.0]\ndelta = 1.0\nformat = \"json\"\nkind = \"fermionic_i\"\n").unwrap();
    let o = twocenter(&["norm", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let json_rows = v["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), 2);
    let n = json_rows[1]["norm"].as_f64().unwrap();
    assert!((n / 16.6347 - 1.0).abs() < 5e-3);

    let o = twocenter(&["norm", "--config", cfg.to_str().unwrap(), "--format", "csv", "--hbar", "2"]);
    assert_eq!(rows(&stdout(&o)).len(), 1);
}

#[test]
fn worker_count_from_environment() {
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_twocenter"))
            .args(["norm", "--hbar", "1,2,3"])
            .env("TWOCENTER_WORKERS", w)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("4").stdout);
    assert!(!run("zero").status.success());
}
