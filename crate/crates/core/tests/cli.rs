//! End-to-end tests of the `supertransport` binary: exit codes, report
//! files and transport results.

use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supertransport")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_report(v: &Value, pass: bool) {
    assert_eq!(v["schema"], "supertransport-report/1");
    assert_eq!(v["pass"], pass);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["residual"].as_f64().unwrap() >= 0.0);
        assert_eq!(c["pass"].as_bool().unwrap(), c["residual"].as_f64().unwrap() <= c["threshold"].as_f64().unwrap());
    }
}

#[test]
fn verify_suites_write_passing_reports() {
    let dir = tempfile::tempdir().unwrap();
    for args in [vec!["clifford"], vec!["jacobi", "--algebra", "t134"], vec!["fierz", "--generators", "4"], vec!["forms", "--cases", "30"]] {
        let out = dir.path().join(format!("{}.json", args[0]));
        let mut full = vec!["verify"];
        full.extend(&args);
        full.extend(["--out", out.to_str().unwrap()]);
        let o = run(&full);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v = read_json(&out);
        assert_report(&v, true);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["residual"] == 0.0));
    }
}

#[test]
fn reports_are_byte_stable() {
    let a = run(&["verify", "forms", "--seed", "3", "--cases", "12"]);
    let b = run(&["verify", "forms", "--seed", "3", "--cases", "12"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "forms", "--seed", "4", "--cases", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&run(&["verify", "no-such-suite"])), 64);
    assert_eq!(code(&run(&[])), 64);
    assert_eq!(code(&run(&["verify", "clifford", "--bogus"])), 64);
    assert_eq!(code(&run(&["killing", "--model", "desitter"])), 64);
    assert_eq!(code(&run(&["transport", "--connection", "x.toml", "--method", "euler"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

const CONN: &str = r#"
[chart]
even = ["t"]
params = ["s1", "s2", "s3"]

[algebra]
kind = "gl"
p = 2
q = 0

[connection.E11]
terms = [{ dx = ["t"], coef = { terms = [{ coef = 0.7 }] } }]
[connection.E12]
terms = [{ dx = ["t"], coef = { terms = [{ coef = -1.3 }, { idx = ["s1", "s2"], coef = 0.5 }] } }]
[connection.E21]
terms = [{ dx = ["t"], coef = { terms = [{ coef = 0.4 }] } }]
[connection.E22]
terms = [{ dx = ["t"], coef = { terms = [{ coef = 0.2 }] } }]

[path.line]
from = [0]
to = [1]

[gauge.constant]
E11 = 0.3
E22 = -0.2
"#;

fn mexp2(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    // closed form for 2×2 matrices: exp(M) = e^{τ}(cosh δ I + sinh δ/δ (M − τI))
    let tau = (m[0][0] + m[1][1]) / 2.0;
    let (a, d) = (m[0][0] - tau, m[1][1] - tau);
    let disc = Complex64::new(a * a + m[0][1] * m[1][0], 0.0).sqrt();
    let (ch, sh) = (disc.cosh(), if disc.norm() < 1e-300 { Complex64::new(1.0, 0.0) } else { disc.sinh() / disc });
    let e = tau.exp();
    let f = |z: Complex64| (z * e).re;
    [[f(ch + sh * a), f(sh * m[0][1])], [f(sh * m[1][0]), f(ch + sh * d)]]
}

#[test]
fn transport_constant_connection_and_property_checks() {
    let dir = tempfile::tempdir().unwrap();
    let conn = dir.path().join("conn.toml");
    std::fs::write(&conn, CONN).unwrap();
    let out = dir.path().join("result.json");
    let o = run(&["transport", "--connection", conn.to_str().unwrap(), "--steps", "1000", "--method", "rk4", "--check", "functoriality,gauge,reparam", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_eq!(v["method"], "rk4");
    assert_eq!(v["steps"], 1000);
    assert_report(&v["report"], true);
    let ids: Vec<&str> = v["report"]["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    for id in ["functoriality", "gauge-covariance", "reparametrization"] {
        assert!(ids.contains(&id), "{id}");
    }
    let want = mexp2([[-0.7, 1.3], [-0.4, -0.2]]);
    let entries = &v["holonomy"]["entries"];
    for (i, row) in want.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            let body: f64 = entries[i][j]["terms"].as_array().unwrap().iter().filter(|t| t["idx"].as_array().unwrap().is_empty()).map(|t| t["coef"].as_f64().unwrap()).sum();
            assert!((body - w).abs() < 1e-10, "({i},{j}): {body} vs {w}");
        }
    }
}

#[test]
fn transport_input_errors_exit_65() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    let o = run(&["transport", "--connection", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 65);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json"));
    let odd = dir.path().join("odd.toml");
    std::fs::write(&odd, CONN.replace("kind = \"gl\"", "kind = \"sl\"")).unwrap();
    assert_eq!(code(&run(&["transport", "--connection", odd.to_str().unwrap()])), 65);
    let missing = dir.path().join("nothing.toml");
    assert_eq!(code(&run(&["transport", "--connection", missing.to_str().unwrap()])), 65);
}

#[test]
fn sugra_and_minkowski_killing_pass() {
    let o = run(&["sugra", "--checks", "dl", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_report(&v, true);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["id"] == "dl-identity-random"));
    let o = run(&["killing", "--model", "minkowski"]);
    assert_eq!(code(&o), 0);
    assert_report(&serde_json::from_slice(&o.stdout).unwrap(), true);
}

#[test]
fn ads_killing_exit_code_follows_report() {
    let o = run(&["killing", "--model", "ads", "--L", "1", "--jet", "1"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let pass = v["pass"].as_bool().unwrap();
    assert_eq!(code(&o), if pass { 0 } else { 2 });
    for id in ["ads-flatness-jet", "ads-killing-spinor-jet", "ads-metric-origin", "killing-bilinear-lorentz"] {
        let c = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap();
        assert_eq!(c["residual"], 0.0, "{id}");
    }
}

#[test]
fn conventions_print_gamma_data() {
    let o = run(&["conventions"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["eta"], serde_json::json!([-1, 1, 1, 1]));
    assert_eq!(v["gamma_lower"].as_array().unwrap().len(), 4);
}
