use std::path::Path;
use std::process::{Command, Output};

fn mapaoi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapaoi")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = mapaoi(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generated_instance_feeds_both_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let srp = dir.path().join("srp.json");
    let lb = dir.path().join("lb.json");
    let p = |x: &Path| x.to_str().unwrap().to_string();
    ok(&["gen-instance", "two-ap", "--users", "2", "--eta", "0.3", "--seed", "4", "--out", &p(&inst)]);
    assert_eq!(json(&inst)["users"].as_array().unwrap().len(), 4);

    ok(&["solve-srp", &p(&inst), "--out", &p(&srp)]);
    ok(&["lower-bound", &p(&inst), "--out", &p(&lb)]);
    let j = json(&srp)["expected_aoi"].as_f64().unwrap();
    let l = json(&lb)["value"].as_f64().unwrap();
    assert!(0.0 <= l && l < j, "{l} vs {j}");

    // too small a column budget is reported, not ignored
    let out = mapaoi(&["solve-srp", &p(&inst), "--budget", "2"]);
    assert!(!out.status.success());
}

#[test]
fn scenario_run_writes_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.json");
    std::fs::write(
        &scenario,
        r#"{"id": "tiny", "layout": {"type": "two_ap", "users_per_ap": 2, "eta": 0.2},
            "seeds": [1, 2], "horizon_slots": 500, "policies": ["baseline", "mw"]}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    ok(&["run", scenario.to_str().unwrap(), "--out", out.to_str().unwrap(), "--workers", "1", "--dump-trace"]);

    let mut r = csv::Reader::from_path(out.join("results.csv")).unwrap();
    let header = r.headers().unwrap().clone();
    assert_eq!(&header[0], "scenario-id");
    assert!(header.iter().any(|h| h == "avg_weighted_aoi_slots"));
    let rows: Vec<_> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|x| &x[0] == "tiny"));
    assert!(out.join("timing.csv").exists());
    assert!(out.join("timing_summary.csv").exists());
    assert_eq!(std::fs::read_dir(out.join("reports")).unwrap().count(), 2);
    assert_eq!(std::fs::read_dir(out.join("traces")).unwrap().count(), 4);
}

#[test]
fn invalid_scenario_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.json");
    std::fs::write(&scenario, r#"{"layout": {"type": "two_ap"}, "policies": []}"#).unwrap();
    let out = mapaoi(&["run", scenario.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("policy list is empty"));
}

#[test]
fn bench_writes_decision_times() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    ok(&["gen-instance", "hex", "--num-aps", "3", "--users", "2", "--out", inst.to_str().unwrap()]);
    let stdout = ok(&["bench", "--instance", inst.to_str().unwrap(), "--states", "5", "--out", dir.path().to_str().unwrap()]);
    assert!(stdout.contains("amw"));
    let text = std::fs::read_to_string(dir.path().join("decision_times.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn shipped_scenarios_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let s = mapaoi::experiments::Scenario::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!s.points().is_empty());
        n += 1;
    }
    assert!(n >= 2);
}
