use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_fblab");

const PROBLEM: &str = r#""problem": {"d1": 1, "d2": 1, "alpha1": 0.1, "alpha2": 0.1, "mu1": 1, "mu2": 1,
    "period": 1, "a": 1, "b": 1, "k": 0.2, "h": 0.2}"#;

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn schema_errors_carry_a_json_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        &format!(r#"{{{PROBLEM}, "numerics": {{"front": {{"ny": "many"}}}}}}"#),
    );
    let o = run(&["simulate", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/numerics/front/ny"), "{}", stderr(&o));

    let cfg = write_config(
        dir.path(),
        "neg.json",
        &format!("{{{}}}", PROBLEM.replace("\"d1\": 1", "\"d1\": -2")),
    );
    let o = run(&["eigen", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/problem/d1"), "{}", stderr(&o));
}

#[test]
fn failing_hypothesis_is_reported_not_raised() {
    let dir = tempfile::tempdir().unwrap();
    // Strong drift: the small-advection condition fails while competition stays weak.
    let body = format!(
        "{{{}}}",
        PROBLEM.replace("\"alpha1\": 0.1", "\"alpha1\": 2.5")
    );
    let cfg = write_config(dir.path(), "h3.json", &body);
    let o = run(&["check-hypotheses", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H3: fail"), "{}", stdout(&o));
    assert!(dir.path().join("check-hypotheses/hypotheses.json").exists());
}

#[test]
fn model_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // Competition so strong that the lower carrying envelope has no positive orbit.
    let body = format!("{{{}}}", PROBLEM.replace("\"k\": 0.2", "\"k\": 2.0"));
    let cfg = write_config(dir.path(), "strong.json", &body);
    let o = run(&["orbit", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn outputs_are_deterministic_and_embed_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!(
        r#"{{{PROBLEM}, "init": {{"s1_0": 2.0, "s2_0": 1.0}},
            "numerics": {{"horizon_periods": 2, "front": {{"ny": 50, "steps_per_period": 100}}}}}}"#
    );
    let cfg = write_config(dir.path(), "sim.json", &body);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(
        run(&["simulate", cfg.to_str().unwrap()], &a).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["simulate", cfg.to_str().unwrap()], &b).status.code(),
        Some(0)
    );
    for file in ["simulate.json", "trajectory.csv", "snapshots.csv"] {
        let x = std::fs::read(a.join("simulate").join(file)).unwrap();
        let y = std::fs::read(b.join("simulate").join(file)).unwrap();
        assert_eq!(x, y, "{file} differs");
    }
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(a.join("simulate/simulate.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["numerics"]["front"]["ny"], 50);
    assert_eq!(json["config"]["thresholds"]["eps_v"], 1e-4);
    let csv = std::fs::read_to_string(a.join("simulate/trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,s1,s2,sup_u,sup_v,ds1,ds2"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 7);
    // 17 significant digits: one leading digit and sixteen decimals.
    assert_eq!(first[1], "2.0000000000000000e0");
}

#[test]
fn output_directory_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p.json", &format!("{{{PROBLEM}}}"));
    let o = Command::new(BIN)
        .args(["check-hypotheses", cfg.to_str().unwrap()])
        .env("FBLAB_OUT", dir.path().join("env"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir
        .path()
        .join("env/check-hypotheses/hypotheses.json")
        .exists());
}
