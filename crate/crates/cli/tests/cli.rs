use std::process::{Command, Output};

const BELL: &str = "0.7071067811865476,0,0,0,0,0,0.7071067811865476,0";
const GREEN: &str = "0.4,0,0.8,0,0.2,0,0.4,0";

fn entangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entangle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn sweep_csv_shape() {
    let o = entangle(&["sweep", "--channel", "ad", "--state", BELL, "--steps", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("P,C_numeric,C_analytic"));
    let r = rows(&text);
    assert_eq!(r.len(), 11);
    assert_eq!(r[0][0], 0.0);
    assert_eq!(r[10][0], 1.0);
    assert!(r.windows(2).all(|w| w[1][0] > w[0][0]));
    for row in &r {
        assert!((row[1] - row[2]).abs() < 1e-10);
    }
    assert!((r[0][1] - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let args = ["sweep", "--channel", "pd", "--state", GREEN, "--format", "json"];
    assert_eq!(entangle(&args).stdout, entangle(&args).stdout);
}

#[test]
fn bell_dp_sweep_vanishes_from_two_thirds() {
    let o = entangle(&["sweep", "--channel", "dp", "--state", BELL, "--steps", "31"]);
    for row in rows(&stdout(&o)) {
        if row[0] >= 2.0 / 3.0 {
            assert!(row[1] < 1e-9, "C({}) = {}", row[0], row[1]);
        } else {
            assert!(row[1] > 0.0, "C({}) = {}", row[0], row[1]);
        }
    }
}

#[test]
fn analyze_bell_dp() {
    let o = entangle(&["analyze", "--channel", "dp", "--state", BELL]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["esd_p"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-11);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["esd_p", "p_minus", "c_minus", "p_plus", "c_plus", "c_tilde", "classification", "delta_theta"] {
        assert!(keys.contains(&k), "missing {k}");
    }
}

#[test]
fn analyze_green_ad_creates_then_decays() {
    let o = entangle(&["analyze", "--channel", "ad", "--state", GREEN]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classification"], "CreationThenDecay");
    assert!((v["p_plus"].as_f64().unwrap() - 0.75).abs() < 1e-11);
    assert!((v["c_plus"].as_f64().unwrap() - 0.08).abs() < 1e-11);
}

#[test]
fn nonmarkov_starts_at_p_one() {
    let o = entangle(&[
        "nonmarkov",
        "--state",
        BELL,
        "--big-gamma",
        "0.1",
        "--small-gamma",
        "1",
        "--t-max",
        "5",
        "--steps",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("t,P,C_inter_numeric"));
    let r = rows(&text);
    assert_eq!(r.len(), 6);
    assert_eq!(r[0][0], 0.0);
    assert!((r[0][1] - 1.0).abs() < 1e-12);
    assert!(r.iter().all(|row| (0.0..=1.0).contains(&row[1])));
}

#[test]
fn compare_columns() {
    let o = entangle(&["compare", "--channel", "ad", "--state", GREEN, "--steps", "5"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("P,C_intra,C_inter"));
    assert_eq!(rows(&text).len(), 5);
}

#[test]
fn verify_default_seed_passes() {
    let o = entangle(&["verify", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(o.stdout, entangle(&["verify", "--trials", "50", "--seed", "42"]).stdout);
}

#[test]
fn unnormalized_state_is_a_state_error() {
    let o = entangle(&["analyze", "--channel", "ad", "--state", "1,0,1,0,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(3));
    let o = entangle(&["analyze", "--channel", "ad", "--state", "1,0,1,0,0,0,0,0", "--normalize"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["sweep", "--channel", "ad", "--state", "1,2,3"][..],
        &["sweep", "--channel", "ad", "--state", BELL, "--p-min", "0.5", "--p-max", "0.2"],
        &["sweep", "--channel", "ad", "--state", BELL, "--steps", "1"],
        &["nonmarkov", "--state", BELL, "--big-gamma", "-1", "--small-gamma", "1", "--t-max", "1"],
        &["verify", "--trials", "0"],
    ] {
        let o = entangle(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("entangle-out-{}.csv", std::process::id()));
    let o = entangle(&["sweep", "--channel", "pd", "--state", BELL, "--steps", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(rows(&text).len(), 3);
}
