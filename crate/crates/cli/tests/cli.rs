use std::io::Write;
use std::process::{Command, Output};

fn nullity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nullity")).args(args).output().unwrap()
}

fn config(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("nullity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zoo_matches_golden_table() {
    let o = nullity(&["zoo"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 751);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn zoo_mismatch_exits_2() {
    let golden = "family,d,n,p_star,s,p,verdict\nf_inf,1/2,1,,-0.25,2,NotNull\nf_inf,1/2,1,,0.5,2,Null\n";
    let path = config("golden.csv", golden);
    let cfg = config("zoo.json", &format!("{{\"golden\": {path:?}}}"));
    let o = nullity(&["zoo", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("F(1/2,inf)"));
}

#[test]
fn unknown_fields_exit_4() {
    let cfg = config("bad.json", r#"{"s": 0.25, "radius": 3}"#);
    let o = nullity(&["scaling", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn non_convergence_exits_3() {
    let cfg = config("cg.json", r#"{"n": 1024, "half_width": 8, "solver": {"cg_max_iterations": 1}}"#);
    let o = nullity(&["capacity", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn classify_is_deterministic() {
    let cfg = config(
        "classify.json",
        r#"{"spec": {"family": "fat_cantor", "params": {"alpha": "1/4", "beta": "1/4"}, "n": 1}, "s": [0.1, 0.3, 0.6], "p": [2, 3]}"#,
    );
    let a = nullity(&["classify", "--config", &cfg, "--threads", "2"]);
    let b = nullity(&["classify", "--config", &cfg]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 7);
}

#[test]
fn empty_cheese_is_certified() {
    let cfg = config(
        "cheese.json",
        r#"{"cloud": {"kind": "explicit", "domain": {"lower": [0], "upper": [1]}, "balls": [], "inner_ball": {"center": [0.5], "radius": 0.5}}}"#,
    );
    let o = nullity(&["cheese", "--config", &cfg, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["certified"], true);
}

#[test]
fn random_cheese_follows_seed() {
    let cfg = config("random.json", r#"{"cloud": {"kind": "random", "balls": 20, "min_radius": 1e-4, "max_radius": 1e-2}}"#);
    let a = nullity(&["cheese", "--config", &cfg, "--seed", "7"]);
    let b = nullity(&["cheese", "--config", &cfg, "--seed", "7"]);
    let c = nullity(&["cheese", "--config", &cfg, "--seed", "8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn appendix_b_rows() {
    let out_path = config("ab.json", "");
    let o = nullity(&["appendix-b", "--format", "json", "--out", &out_path]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v[0]["Cap_exact"], "6");
    assert_eq!(v[1]["Cap_exact"], "8");
    let slope = v[1]["trial_slope"].as_f64().unwrap();
    assert!((slope + 11.0 / 3.0).abs() < 0.01 * 11.0 / 3.0);
    assert!(v[0]["cap_grid_value"].as_f64().unwrap() < v[0]["best_trial_value"].as_f64().unwrap());
}

#[test]
fn norm_sweep_plancherel_row() {
    let cfg = config("sweep.json", r#"{"s": [0.0], "depth_min": 3, "depth_max": 3}"#);
    let o = nullity(&["norm-sweep", "--config", &cfg, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // 2^3 l_3 for alpha = beta = 1/4
    let measure = 8.0 * (((1.0 - 0.25) / 2.0 - 0.0625) / 2.0 - 0.015625) / 2.0;
    let got = v[0]["norm_sq"].as_f64().unwrap();
    assert!((got - measure).abs() <= v[0]["tail_bound"].as_f64().unwrap());
}

#[test]
fn threshold_curve_checks_pass() {
    let cfg = config("curve.json", r#"{"source": {"kind": "fat_lower_bound", "alpha": 0.25}, "samples": ["1/4", "1/2", "3/4"]}"#);
    let o = nullity(&["threshold-curve", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
}
