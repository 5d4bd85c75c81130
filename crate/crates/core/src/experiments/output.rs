use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::runner::{ResultRow, SolveRow, SuiteResult};
use crate::error::Result;

pub const RESULTS_FILE: &str = "results.csv";
pub const TIMING_FILE: &str = "timing.csv";
pub const SUMMARY_FILE: &str = "timing_summary.csv";
pub const REPORTS_DIR: &str = "reports";

/// Writes any serializable rows as CSV with a header row.
pub fn write_csv<T: Serialize>(out: impl Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_results(out: impl Write, rows: &[ResultRow]) -> Result<()> {
    if rows.is_empty() {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(RESULT_COLUMNS)?;
        w.flush()?;
        return Ok(());
    }
    write_csv(out, rows)
}

pub const RESULT_COLUMNS: [&str; 13] = [
    "scenario-id",
    "policy",
    "seed",
    "K",
    "N",
    "eta",
    "avg_weighted_aoi_slots",
    "avg_weighted_aoi_ms",
    "lower_bound",
    "srp_closed_form",
    "mean_decision_time_us",
    "frames",
    "deliveries",
];

/// Seed-averaged AoI and decision time per (point, policy), plus the mean
/// offline solve times at that point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    #[serde(rename = "scenario-id")]
    pub scenario_id: String,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub eta: String,
    pub policy: String,
    pub runs: usize,
    pub mean_aoi_slots: Option<f64>,
    pub sd_aoi_slots: Option<f64>,
    pub mean_decision_time_us: Option<f64>,
    pub srp_solve_seconds: Option<f64>,
    pub lower_bound_solve_seconds: Option<f64>,
}

fn mean_sd(v: &[f64]) -> (Option<f64>, Option<f64>) {
    if v.is_empty() {
        return (None, None);
    }
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let sd = (v.len() > 1).then(|| (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt());
    (Some(m), sd)
}

fn eta_key(eta: Option<f64>) -> String {
    eta.map_or_else(|| "n/a".into(), |e| e.to_string())
}

pub fn summarize(rows: &[ResultRow], solves: &[SolveRow]) -> Vec<SummaryRow> {
    type Key = (String, usize, usize, String);
    let mut order: Vec<(Key, String)> = Vec::new();
    let mut groups: BTreeMap<(Key, String), Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        let key = ((r.scenario_id.clone(), r.k, r.n, eta_key(r.eta)), r.policy.clone());
        let g = groups.entry(key.clone()).or_default();
        if g.is_empty() {
            order.push(key);
        }
        g.push(r);
    }
    let solve_mean = |key: &Key, program: &str| {
        let t: Vec<f64> = solves
            .iter()
            .filter(|s| s.program == program && (&s.scenario_id, s.k, s.n, eta_key(s.eta)) == (&key.0, key.1, key.2, key.3.clone()))
            .map(|s| s.wall_time_seconds)
            .collect();
        mean_sd(&t).0
    };
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let aoi: Vec<f64> = g.iter().filter_map(|r| r.avg_weighted_aoi_slots.value()).collect();
            let dec: Vec<f64> = g.iter().filter_map(|r| r.mean_decision_time_us.value()).collect();
            let (mean_aoi, sd_aoi) = mean_sd(&aoi);
            let ((id, k, n, eta), policy) = key.clone();
            SummaryRow {
                srp_solve_seconds: solve_mean(&key.0, "srp"),
                lower_bound_solve_seconds: solve_mean(&key.0, "lower-bound"),
                scenario_id: id,
                k,
                n,
                eta,
                policy,
                runs: aoi.len(),
                mean_aoi_slots: mean_aoi,
                sd_aoi_slots: sd_aoi,
                mean_decision_time_us: mean_sd(&dec).0,
            }
        })
        .collect()
}

/// Paths written by [`write_suite`].
#[derive(Debug, Clone)]
pub struct SuiteFiles {
    pub results: PathBuf,
    pub timing: PathBuf,
    pub summary: PathBuf,
    pub reports: Vec<PathBuf>,
}

/// Writes results, solver timings, the per-point summary and one JSON
/// report per point and seed under `dir`.
pub fn write_suite(dir: &Path, result: &SuiteResult) -> Result<SuiteFiles> {
    fs::create_dir_all(dir.join(REPORTS_DIR))?;
    let files = SuiteFiles {
        results: dir.join(RESULTS_FILE),
        timing: dir.join(TIMING_FILE),
        summary: dir.join(SUMMARY_FILE),
        reports: result.reports.iter().map(|r| dir.join(REPORTS_DIR).join(format!("{}.json", r.stem()))).collect(),
    };
    write_results(fs::File::create(&files.results)?, &result.rows)?;
    write_csv(fs::File::create(&files.timing)?, &result.solves)?;
    write_csv(fs::File::create(&files.summary)?, &summarize(&result.rows, &result.solves))?;
    for (r, path) in result.reports.iter().zip(&files.reports) {
        fs::write(path, serde_json::to_string_pretty(r)?)?;
    }
    Ok(files)
}
