use std::collections::HashSet;

use super::*;
use crate::error::Error;
use crate::model::PhysicsParams;
use crate::policy::{ApproxMaxWeight, MaxWeight};

fn small_two_ap() -> Scenario {
    let mut s = Scenario::new("small", LayoutSpec::TwoAp(TwoApParams { users_per_ap: 2, ..Default::default() }));
    s.seeds = vec![1, 2, 3];
    s.horizon_slots = 3_000;
    s.sweep.eta = vec![0.0, 0.5];
    s
}

fn opts() -> RunOptions {
    RunOptions { workers: Some(2), ..Default::default() }
}

/// Row contents with the wall-clock column blanked.
fn stable(rows: &[ResultRow]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            let mut r = r.clone();
            r.mean_decision_time_us = Metric::NotComputed;
            format!("{r:?}")
        })
        .collect()
}

#[test]
fn every_cell_appears_once() {
    let s = small_two_ap();
    let res = run_suite(&s, &opts()).unwrap();
    assert_eq!(res.rows.len(), 2 * 3 * 4);
    let keys: HashSet<_> = res.rows.iter().map(|r| (r.eta.unwrap().to_bits(), r.seed, r.policy.clone())).collect();
    assert_eq!(keys.len(), res.rows.len());
    assert_eq!(res.reports.len(), 6);
    assert_eq!(res.solves.len(), 12);
    for r in &res.rows {
        assert_eq!((r.k, r.n), (2, 4));
        let slots = r.avg_weighted_aoi_slots.value().unwrap();
        let ms = r.avg_weighted_aoi_ms.value().unwrap();
        assert!((ms - slots * 1e-4 * 1e3).abs() <= 1e-12 * ms.max(1.0));
        assert!(r.lower_bound.value().unwrap() > 0.0);
        assert!(r.frames.value().unwrap() > 0 && r.deliveries.value().unwrap() > 0);
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let s = small_two_ap();
    let a = run_suite(&s, &RunOptions { workers: Some(1), ..Default::default() }).unwrap();
    let b = run_suite(&s, &RunOptions { workers: Some(4), ..Default::default() }).unwrap();
    assert_eq!(stable(&a.rows), stable(&b.rows));
}

#[test]
fn large_family_marks_offline_columns_not_computed() {
    let mut s = Scenario::new("k9", LayoutSpec::Hex(HexParams { users_per_cell: 2, ..Default::default() }));
    s.seeds = vec![4];
    s.horizon_slots = 500;
    let res = run_suite(&s, &RunOptions { column_budget: Some(1000), ..opts() }).unwrap();
    assert_eq!(res.rows.len(), 4);
    assert!(res.reports.is_empty() && res.solves.is_empty());
    for r in &res.rows {
        assert_eq!(r.eta, None);
        assert_eq!(r.lower_bound, Metric::NotComputed);
        assert_eq!(r.srp_closed_form, Metric::NotComputed);
        let skipped = r.policy == "srp" || r.policy == "mw";
        assert_eq!(r.avg_weighted_aoi_slots.value().is_none(), skipped, "{}", r.policy);
    }
}

#[test]
fn forced_mw_runs_on_large_grids() {
    let mut s = Scenario::new("k9", LayoutSpec::Hex(HexParams { users_per_cell: 1, ..Default::default() }));
    s.seeds = vec![4];
    s.horizon_slots = 200;
    s.policies = vec![PolicySpec::Mw];
    let o = RunOptions { force_mw: true, column_budget: Some(10), ..opts() };
    let res = run_suite(&s, &o).unwrap();
    assert!(res.rows[0].avg_weighted_aoi_slots.value().is_some());
}

#[test]
fn csv_has_exact_header_and_markers() {
    let mut s = Scenario::new("k9", LayoutSpec::Hex(HexParams { users_per_cell: 1, ..Default::default() }));
    s.seeds = vec![1];
    s.horizon_slots = 100;
    s.policies = vec![PolicySpec::Baseline, PolicySpec::Srp];
    let res = run_suite(&s, &RunOptions { column_budget: Some(100), ..opts() }).unwrap();
    let mut buf = Vec::new();
    write_results(&mut buf, &res.rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), RESULT_COLUMNS.join(","));
    let baseline = lines.next().unwrap();
    assert!(baseline.starts_with("k9,baseline,1,9,9,n/a,"), "{baseline}");
    assert!(baseline.contains(",not computed,not computed,"), "{baseline}");
    let srp = lines.next().unwrap();
    assert_eq!(srp.matches("not computed").count(), 7, "{srp}");

    let mut buf = Vec::new();
    write_results(&mut buf, &[]).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().trim(), RESULT_COLUMNS.join(","));
}

#[test]
fn suite_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = small_two_ap();
    s.seeds = vec![1];
    s.sweep.eta = vec![0.3];
    let o = RunOptions { trace_dir: Some(dir.path().join("traces")), ..opts() };
    let res = run_suite(&s, &o).unwrap();
    let files = write_suite(dir.path(), &res).unwrap();
    let csv = std::fs::read_to_string(&files.results).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
    let timing = std::fs::read_to_string(&files.timing).unwrap();
    assert!(timing.starts_with("scenario-id,program,seed,K,N,eta,objective,"));
    assert_eq!(timing.lines().count(), 3);
    let summary = std::fs::read_to_string(&files.summary).unwrap();
    assert_eq!(summary.lines().count(), 1 + 4);
    assert_eq!(files.reports.len(), 1);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&files.reports[0]).unwrap()).unwrap();
    assert_eq!(report["report"]["srp"]["holds"], serde_json::Value::Bool(true));
    let traces: Vec<_> = std::fs::read_dir(dir.path().join("traces")).unwrap().collect();
    assert_eq!(traces.len(), 4);
}

#[test]
fn empty_policy_list_fails_before_running() {
    let mut s = small_two_ap();
    s.policies.clear();
    assert!(matches!(run_suite(&s, &opts()), Err(Error::InvalidScenario(_))));
}

#[test]
fn summary_averages_over_seeds() {
    let s = small_two_ap();
    let res = run_suite(&s, &opts()).unwrap();
    let summary = summarize(&res.rows, &res.solves);
    assert_eq!(summary.len(), 2 * 4);
    for row in &summary {
        let vals: Vec<f64> = res
            .rows
            .iter()
            .filter(|r| r.policy == row.policy && r.eta.unwrap().to_string() == row.eta)
            .map(|r| r.avg_weighted_aoi_slots.value().unwrap())
            .collect();
        assert_eq!(row.runs, 3);
        let mean = vals.iter().sum::<f64>() / 3.0;
        assert!((row.mean_aoi_slots.unwrap() - mean).abs() < 1e-9);
        assert!(row.srp_solve_seconds.is_some());
    }
}

#[test]
fn single_state_bench_is_degenerate() {
    let net = gen_two_ap(&TwoApParams::default(), PhysicsParams::default(), 1).unwrap();
    let t = bench_decision_time(&net, &MaxWeight, 1, 3);
    assert_eq!(t.states, 1);
    assert_eq!(t.mean_us, t.median_us);
    assert_eq!(t.mean_us, t.max_us);
    let t = bench_decision_time(&net, &ApproxMaxWeight::default(), 25, 3);
    assert_eq!(t.states, 25);
    assert!(t.median_us <= t.max_us && t.mean_us <= t.max_us);
}

#[test]
fn bench_states_are_bounded_and_seeded() {
    let a = bench_states(7, 50, 9);
    assert_eq!(a, bench_states(7, 50, 9));
    assert!(a.iter().flat_map(|s| s.ages.iter()).all(|&x| x <= MAX_BENCH_AGE));
    assert!(a.iter().flat_map(|s| s.ages.iter()).any(|&x| x > 150));
}
