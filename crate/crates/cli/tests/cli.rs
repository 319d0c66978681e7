use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frac-hirota"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn missing_alpha_is_a_usage_error() {
    assert_eq!(code(&run(&["deriv"])), 2);
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn alpha_outside_the_range_is_rejected() {
    assert_eq!(code(&run(&["deriv", "--alpha", "1.5"])), 2);
    assert_eq!(code(&run(&["deriv", "--alpha", "0"])), 2);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "alpha = 0.5\nnot_a_flag = 3\n").unwrap();
    let out = run(&["deriv", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not-a-flag"));
}

#[test]
fn command_line_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "alpha = 0.3\nfunc = mode:1\nformat = json\n").unwrap();
    let out = run(&["deriv", "--config", cfg.to_str().unwrap(), "--alpha", "0.7"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["alpha"], 0.7);
    assert_eq!(v["func"], "mode:1");
}

#[test]
fn gaussian_spectral_and_marchaud_agree() {
    let out = run(&["deriv", "--alpha", "0.5", "--compare-marchaud", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let m = &stdout_json(&out)["marchaud"];
    assert!(m["max_discrepancy"].as_f64().unwrap() <= 1e-6);
    assert_eq!(m["quality_ok"], true);
}

#[test]
fn first_derivative_of_a_mode_is_exact() {
    let out = run(&["deriv", "--alpha", "1", "--func", "mode:1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out)["exact_max_error"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn forward_direction_uses_the_conjugate_symbol() {
    let out = run(&["deriv", "--alpha", "0.5", "--func", "mode:1", "--direction", "forward", "--compare-marchaud", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!(v["exact_max_error"].as_f64().unwrap() <= 1e-12);
    assert!(v["marchaud"]["max_discrepancy"].as_f64().unwrap() <= 1e-6);
    // x = -pi: e^{-i pi} e^{-i pi / 4}
    let d0 = &v["points"][0]["d"];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((d0[0].as_f64().unwrap() + h).abs() <= 1e-12);
    assert!((d0[1].as_f64().unwrap() - h).abs() <= 1e-12);
}

#[test]
fn deriv_csv_has_expected_columns() {
    let out = run(&["deriv", "--alpha", "0.5", "--func", "mode:2", "--compare-marchaud"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,f_re,f_im,d_re,d_im,exact_re,exact_im,error,marchaud_re,marchaud_im,discrepancy"
    );
    assert_eq!(lines.count(), 64);
}

#[test]
fn from_csv_round_trip_and_marchaud_refusal() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("f.csv");
    let n = 128;
    let l = 20.0;
    let mut text = String::from("x,re,im\n");
    for j in 0..n {
        let x = -l + 2.0 * l * j as f64 / n as f64;
        text.push_str(&format!("{x:.17e},{:.17e},0\n", (-x * x).exp()));
    }
    std::fs::write(&data, text).unwrap();
    let path = data.to_str().unwrap();
    assert_eq!(code(&run(&["deriv", "--alpha", "0.5", "--func", "from-csv", "--input", path])), 0);
    assert_eq!(
        code(&run(&["deriv", "--alpha", "0.5", "--func", "from-csv", "--input", path, "--compare-marchaud"])),
        2
    );
}

#[test]
fn bilinear_identities_hold() {
    let out = run(&["bilinear", "--alpha", "0.4", "--identities", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["identities"]["skew"], 0.0);
    assert_eq!(v["identities"]["diagonal"], 0.0);
}

#[test]
fn one_soliton_writes_all_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(&["soliton", "--alpha", "0.5", "--k", "-1", "--out-dir", d.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    for name in ["tau.json", "field.csv", "residual.json", "profile.json"] {
        assert!(d.join(name).exists(), "{name}");
    }
    assert_eq!(read_json(&d.join("residual.json"))["max_abs"], 0.0);
    assert_eq!(read_json(&d.join("profile.json"))["pass"], true);
}

#[test]
fn two_soliton_reports_the_interaction_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(&[
        "soliton", "--alpha", "1", "--k", "-1", "--k", "-3", "--out-dir", d.to_str().unwrap(), "--pde-residual",
    ]);
    assert_eq!(code(&out), 0);
    let a12 = &read_json(&d.join("tau.json"))["a12"];
    assert!((a12[0].as_f64().unwrap() - 0.25).abs() <= 1e-15);
    assert_eq!(a12[1], 0.0);
    assert_eq!(read_json(&d.join("residual.json"))["max_abs"], 0.0);
    let pde = read_json(&d.join("pde_residual.json"));
    assert_eq!(pde["pass"], true);
    assert!(pde["max_abs"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn phase_shifts_match_the_interaction_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(&["soliton", "--alpha", "0.7", "--k", "-1.5", "--k", "-0.8", "--phase-shifts", "--out-dir", d.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = read_json(&d.join("phase_shifts.json"));
    let a12: f64 = ((-0.8 + 1.5) / (-0.8 - 1.5f64)).powi(2);
    let predicted = [-a12.ln() / -0.8, a12.ln() / -1.5];
    for j in 0..2 {
        assert!((v["predicted"][j].as_f64().unwrap() - predicted[j]).abs() <= 1e-12);
        assert!((v["measured"][j].as_f64().unwrap() - predicted[j]).abs() <= 1e-6);
    }
    let one = run(&["soliton", "--alpha", "0.7", "--k", "-1", "--phase-shifts", "--out-dir", d.to_str().unwrap()]);
    assert_eq!(code(&one), 2);
}

#[test]
fn opposite_wavenumbers_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["soliton", "--alpha", "0.5", "--k", "1", "--k", "-1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn kp_residual_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(&["kp", "--alpha", "0.6", "--k", "-1", "--ell", "0.5", "--sign", "-1", "--out-dir", d.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_json(&d.join("residual.json"))["max_abs"], 0.0);
    assert_eq!(code(&run(&["kp", "--alpha", "0.6", "--k", "-1", "--sign", "2"])), 2);
}

#[test]
fn limit_check_decreases_towards_one() {
    let out = run(&["limit-check", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rows = stdout_json(&out);
    let d: Vec<f64> = rows.as_array().unwrap().iter().map(|r| r["distance"].as_f64().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    assert!(d[3] <= 1e-12);
}

#[test]
fn single_mode_probe_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("probe.json");
    let out = run(&["sobolev-probe", "--modes", "1:2,-3:7", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_json(&path)["refinement_stable"], true);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["deriv", "--alpha", "0.35", "--func", "sech", "--compare-marchaud", "--n", "512"];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, run(&args).stdout);

    let probe = ["sobolev-probe", "--trials", "10", "--seed", "7"];
    assert_eq!(run(&probe).stdout, run(&probe).stdout);
}

#[test]
fn suite_passes_all_gates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    let out = run(&["suite", "--json", path.to_str().unwrap(), "--alpha-sweep", "0.25:0.75:0.25"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(read_json(&path)["all_gates_pass"], true);
}
