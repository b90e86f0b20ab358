use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn lagexpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagexpm")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(text: &[u8]) -> Value {
    serde_json::from_slice(text).unwrap()
}

const SPECTRUM: &str = "[[-1.0, 2.0], [-1.0, -2.0], [-3.0, 0.0], [-0.5, 0.25], [-0.5, -0.25]]";

/// Real stable 3x3 matrix with eigenvalues -1, -2 +- i.
const MATRIX_JSON: &str = r#"{"m": 3, "entries": [[-1,0],[1,0],[0,0], [0,0],[-2,0],[1,0], [0,0],[-1,0],[-2,0]]}"#;

#[test]
fn analyze_writes_a_report() {
    let dir = TempDir::new().unwrap();
    let sfile = write(dir.path(), "s.json", SPECTRUM);
    let out_path = dir.path().join("r.json");
    let out = lagexpm(&["analyze", "--spectrum", &sfile, "--n", "8", "--mode", "full", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&std::fs::read(&out_path).unwrap());
    assert_eq!(report["n_trunc"], 8);
    assert_eq!(report["dim"], 5);
    let s0 = report["stage0"]["sqrt_phi"].as_f64().unwrap();
    let s1 = report["stage1"]["sqrt_phi"].as_f64().unwrap();
    assert!(s1 <= s0 && s1 > 0.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sqrt(phi)"));
}

#[test]
fn analyze_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lagexpm"))
        .args(["analyze", "--spectrum", "-", "--n", "4"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"[[-3.0, 0.0]]").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let report = json(&out.stdout);
    assert_eq!(report["stage0"]["tau"].as_f64().unwrap(), 6.0);
    assert!(report["stage1"].is_null());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let unstable = write(dir.path(), "u.json", "[[-1.0, 0.0], [0.5, 1.0]]");
    assert_eq!(code(&lagexpm(&["analyze", "--spectrum", &unstable, "--n", "4"])), 3);

    let garbage = write(dir.path(), "g.json", "[[-1.0, ");
    assert_eq!(code(&lagexpm(&["analyze", "--spectrum", &garbage, "--n", "4"])), 2);
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&lagexpm(&["analyze", "--spectrum", missing.to_str().unwrap(), "--n", "4"])), 2);
    let sfile = write(dir.path(), "s.json", SPECTRUM);
    let out = lagexpm(&["analyze", "--spectrum", &sfile, "--n", "51"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(code(&lagexpm(&["analyze", "--spectrum", &sfile, "--n", "4", "--mode", "fast"])), 2);

    let m = write(dir.path(), "m.csv", "1+0i,0+0i\n0+0i,-1+0i\n");
    assert_eq!(code(&lagexpm(&["expand", "--matrix", &m, "--n", "4", "--tau", "1"])), 3);
    assert_eq!(code(&lagexpm(&["expand", "--matrix", &sfile, "--n", "4", "--tau", "1"])), 2);
    assert_eq!(code(&lagexpm(&["bench", "line", "--sections", "0", "--n", "4"])), 2);
}

#[test]
fn expand_then_eval_tracks_the_exponential() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", MATRIX_JSON);
    let series = dir.path().join("series.json");
    let out = lagexpm(&["expand", "--matrix", &m, "--n", "40", "--auto", "--coeffs-out", series.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stored = json(&std::fs::read(&series).unwrap());
    assert_eq!(stored["coeffs"].as_array().unwrap().len(), 41);

    let csv_path = dir.path().join("h.csv");
    let out = lagexpm(&["eval", "--series", series.to_str().unwrap(), "--t", "0,0.5,2", "--out", csv_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("t,h0_0,h0_1"));
    let a = laguerre_expm::io::read_matrix(Path::new(&m)).unwrap();
    for (line, t) in lines[1..].iter().zip([0.0, 0.5, 2.0]) {
        let row: Vec<&str> = line.split(',').collect();
        assert_eq!(row.len(), 10);
        let exact = laguerre_expm::matrix::expm_t(&a, t).unwrap();
        for (token, want) in row[1..].iter().zip(exact.as_slice()) {
            let got = laguerre_expm::io::parse_complex(token).unwrap();
            assert!((got - want).norm() < 1e-4, "t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn expand_with_fixed_parameters_to_stdout() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.csv", "-1+0i,1+0i\n0+0i,-2+0i\n");
    let out = lagexpm(&["expand", "--matrix", &m, "--n", "3", "--tau", "2", "--alpha", "-0.5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let series = json(&out.stdout);
    assert_eq!(series["params"]["alpha"].as_f64().unwrap(), -0.5);
    assert_eq!(series["params"]["tau"].as_f64().unwrap(), 2.0);
    assert_eq!(code(&lagexpm(&["expand", "--matrix", &m, "--n", "3"])), 2);
}

#[test]
fn bench_line_with_oracle_and_plotdata() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("line.json");
    let out = lagexpm(&["bench", "line", "--sections", "5", "--n", "6", "--oracle", "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&std::fs::read(&report).unwrap());
    assert_eq!(r["dim"], 10);
    let oracle = r["oracle"]["error"].as_f64().unwrap();
    let lower = r["stage0"]["lower"].as_f64().unwrap();
    let upper = r["stage0"]["upper_phi"].as_f64().unwrap();
    assert!(lower <= oracle + 1e-8 && oracle <= upper + 1e-8);

    let csv = dir.path().join("sweep.csv");
    let out = lagexpm(&["plotdata", "--report", report.to_str().unwrap(), "--out", csv.to_str().unwrap(), "--points", "25"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 26);
    assert!(text.starts_with("tau,phi_alpha0"));
}

#[test]
fn bench_random_is_reproducible() {
    let args = ["bench", "random", "--count", "30", "--seed", "7", "--n", "8", "--mode", "full"];
    let (a, b) = (lagexpm(&args), lagexpm(&args));
    assert_eq!(code(&a), 0);
    let (ra, rb) = (json(&a.stdout), json(&b.stdout));
    assert_eq!(ra["spectrum"], rb["spectrum"]);
    assert_eq!(ra["stage0"], rb["stage0"]);
    assert_eq!(ra["stage1"], rb["stage1"]);
    let other = json(&lagexpm(&["bench", "random", "--count", "30", "--seed", "8", "--n", "8"]).stdout);
    assert_ne!(ra["spectrum"], other["spectrum"]);
}

#[test]
fn validate_quick_passes() {
    let out = lagexpm(&["validate", "--quick"]);
    let table = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{table}");
    assert!(table.lines().count() >= 8);
    assert!(table.lines().all(|l| l.starts_with("PASS")));
}
