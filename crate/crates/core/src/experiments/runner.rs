use std::path::PathBuf;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::scenario::{LayoutSpec, PolicySpec, Scenario};
use crate::analysis::{ratio_report, RatioReport};
use crate::error::{Error, Result};
use crate::model::NetworkInstance;
use crate::optimizer::{
    build_program, solve_lower_bound, solve_srp, LowerBound, SolveReport, DEFAULT_COLUMN_BUDGET, DEFAULT_TOLERANCE,
};
use crate::policy::{ApproxMaxWeight, MaxWeight, ScheduleDistribution, Stationary};
use crate::sim::{run_asynchronous_baseline, run_frame_synchronous, SimConfig, SimTrace};

/// A numeric cell that may be missing for a reason.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric<T> {
    Value(T),
    /// Above the optimizer budget, or a policy skipped by configuration.
    NotComputed,
    Failed,
}

impl<T: Copy> Metric<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            Self::Value(v) => Some(*v),
            _ => None,
        }
    }

}

impl<T: Serialize> Serialize for Metric<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Value(v) => v.serialize(s),
            Self::NotComputed => s.serialize_str("not computed"),
            Self::Failed => s.serialize_str("failed"),
        }
    }
}

fn eta_or_na<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("n/a"),
    }
}

/// One (scenario point, policy, seed) result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    #[serde(rename = "scenario-id")]
    pub scenario_id: String,
    pub policy: String,
    pub seed: u64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(serialize_with = "eta_or_na")]
    pub eta: Option<f64>,
    pub avg_weighted_aoi_slots: Metric<f64>,
    pub avg_weighted_aoi_ms: Metric<f64>,
    pub lower_bound: Metric<f64>,
    pub srp_closed_form: Metric<f64>,
    pub mean_decision_time_us: Metric<f64>,
    pub frames: Metric<u64>,
    pub deliveries: Metric<u64>,
}

/// Offline optimizer statistics for one program at one point and seed.
#[derive(Debug, Clone, Serialize)]
pub struct SolveRow {
    #[serde(rename = "scenario-id")]
    pub scenario_id: String,
    pub program: &'static str,
    pub seed: u64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(serialize_with = "eta_or_na")]
    pub eta: Option<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub wall_time_seconds: f64,
    pub columns: usize,
    pub support: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    #[serde(rename = "scenario-id")]
    pub scenario_id: String,
    pub seed: u64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(serialize_with = "eta_or_na")]
    pub eta: Option<f64>,
    pub report: RatioReport,
}

impl ReportRecord {
    /// File stem unique within a scenario.
    pub fn stem(&self) -> String {
        point_label(&self.scenario_id, self.k, self.n, self.eta, self.seed)
    }
}

fn point_label(id: &str, k: usize, n: usize, eta: Option<f64>, seed: u64) -> String {
    match eta {
        Some(e) => format!("{id}_K{k}_N{n}_eta{e:.4}_seed{seed}"),
        None => format!("{id}_K{k}_N{n}_seed{seed}"),
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
    pub force_mw: bool,
    /// Write each simulation's frame log as JSON lines under this directory.
    pub trace_dir: Option<PathBuf>,
    pub column_budget: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteResult {
    pub rows: Vec<ResultRow>,
    pub solves: Vec<SolveRow>,
    pub reports: Vec<ReportRecord>,
}

/// Everything computed for one layout point and seed.
pub struct CellRun {
    pub instance: NetworkInstance,
    pub srp: Metric<(ScheduleDistribution, SolveReport)>,
    pub lower_bound: Metric<(LowerBound, SolveReport)>,
    pub traces: Vec<(PolicySpec, Metric<SimTrace>)>,
}

impl<T> Metric<T> {
    fn map<U>(self, f: impl FnOnce(T) -> U) -> Metric<U> {
        match self {
            Self::Value(v) => Metric::Value(f(v)),
            Self::NotComputed => Metric::NotComputed,
            Self::Failed => Metric::Failed,
        }
    }

    fn as_ref(&self) -> Metric<&T> {
        match self {
            Self::Value(v) => Metric::Value(v),
            Self::NotComputed => Metric::NotComputed,
            Self::Failed => Metric::Failed,
        }
    }
}

impl CellRun {
    pub fn trace(&self, policy: PolicySpec) -> Option<&SimTrace> {
        self.traces.iter().find(|(p, _)| *p == policy).and_then(|(_, t)| match t {
            Metric::Value(t) => Some(t),
            _ => None,
        })
    }

    pub fn srp_dist(&self) -> Option<&ScheduleDistribution> {
        self.srp.as_ref().value().map(|(d, _)| d)
    }

    pub fn lower_bound_value(&self) -> Option<&LowerBound> {
        self.lower_bound.as_ref().value().map(|(l, _)| l)
    }
}

fn solve<T>(label: &str, r: Result<T>) -> Metric<T> {
    match r {
        Ok(v) => Metric::Value(v),
        Err(e) => {
            warn!("{label}: {e}");
            Metric::Failed
        }
    }
}

/// Generates the instance for `point` and `seed`, solves both offline
/// programs when the family fits in the budget, and simulates each policy.
pub fn run_cell(scenario: &Scenario, point: &LayoutSpec, seed: u64, opts: &RunOptions) -> Result<CellRun> {
    let physics = scenario.physics.resolve(point)?;
    let instance = point.generate(physics, seed)?;
    let label = point_label(&scenario.id, point.num_aps(), point.num_users(), point.eta(), seed);

    let budget = opts.column_budget.unwrap_or(DEFAULT_COLUMN_BUDGET);
    let (srp, lower_bound) = match build_program(&instance, budget) {
        Ok(prog) => (
            solve(&label, solve_srp(&prog, DEFAULT_TOLERANCE)),
            solve(&label, solve_lower_bound(&prog, DEFAULT_TOLERANCE)),
        ),
        Err(Error::BudgetExceeded { columns, .. }) => {
            info!("{label}: {columns} activation sets, offline programs not computed");
            (Metric::NotComputed, Metric::NotComputed)
        }
        Err(e) => return Err(e),
    };

    let config = SimConfig::new(scenario.horizon_slots, seed);
    let force = scenario.force_mw || opts.force_mw;
    let mut traces = Vec::new();
    for &policy in &scenario.policies {
        let runs = force || scenario.runs(policy, point);
        let t = match policy {
            _ if !runs => Metric::NotComputed,
            PolicySpec::Baseline => Metric::Value(run_asynchronous_baseline(&instance, &config)),
            PolicySpec::Mw => Metric::Value(run_frame_synchronous(&instance, &MaxWeight, &config)),
            PolicySpec::Amw => Metric::Value(run_frame_synchronous(
                &instance,
                &ApproxMaxWeight { epsilon: scenario.epsilon },
                &config,
            )),
            PolicySpec::Srp => match &srp {
                Metric::Value((dist, _)) => {
                    Metric::Value(run_frame_synchronous(&instance, &Stationary { dist: dist.clone() }, &config))
                }
                Metric::NotComputed => Metric::NotComputed,
                Metric::Failed => Metric::Failed,
            },
        };
        if let (Some(dir), Metric::Value(trace)) = (&opts.trace_dir, &t) {
            let path = dir.join(format!("{label}_{}.jsonl", policy.as_str()));
            trace.write_frames_jsonl(std::io::BufWriter::new(std::fs::File::create(path)?))?;
        }
        traces.push((policy, t));
    }
    Ok(CellRun { instance, srp, lower_bound, traces })
}

#[derive(Default)]
struct CellOutput {
    rows: Vec<ResultRow>,
    solves: Vec<SolveRow>,
    report: Option<ReportRecord>,
}

fn summarize(scenario: &Scenario, point: &LayoutSpec, seed: u64, cell: Result<CellRun>) -> CellOutput {
    let (k, n, eta) = (point.num_aps(), point.num_users(), point.eta());
    let id = scenario.id.clone();
    let failed_row = |policy: PolicySpec| ResultRow {
        scenario_id: id.clone(),
        policy: policy.as_str().into(),
        seed,
        k,
        n,
        eta,
        avg_weighted_aoi_slots: Metric::Failed,
        avg_weighted_aoi_ms: Metric::Failed,
        lower_bound: Metric::Failed,
        srp_closed_form: Metric::Failed,
        mean_decision_time_us: Metric::Failed,
        frames: Metric::Failed,
        deliveries: Metric::Failed,
    };
    let cell = match cell {
        Ok(c) => c,
        Err(e) => {
            warn!("{}: {e}", point_label(&id, k, n, eta, seed));
            return CellOutput { rows: scenario.policies.iter().map(|&p| failed_row(p)).collect(), ..Default::default() };
        }
    };
    let inst = &cell.instance;
    let physics = *inst.physics();

    let lb = cell.lower_bound.as_ref().map(|(l, _)| l.value);
    let srp_cf = match &cell.srp {
        Metric::Value((d, _)) => match crate::analysis::srp_expected_aoi(inst, d) {
            Ok(v) => Metric::Value(v),
            Err(e) => {
                warn!("{}: {e}", point_label(&id, k, n, eta, seed));
                Metric::Failed
            }
        },
        Metric::NotComputed => Metric::NotComputed,
        Metric::Failed => Metric::Failed,
    };

    let mut out = CellOutput::default();
    for (policy, t) in &cell.traces {
        let t = t.as_ref();
        let aoi = t.map(|t| t.weighted_average_aoi());
        out.rows.push(ResultRow {
            scenario_id: id.clone(),
            policy: policy.as_str().into(),
            seed,
            k,
            n,
            eta,
            avg_weighted_aoi_slots: aoi,
            avg_weighted_aoi_ms: aoi.map(|a| physics.slots_to_ms(a)),
            lower_bound: lb,
            srp_closed_form: srp_cf,
            mean_decision_time_us: t.map(|t| t.mean_decision_seconds() * 1e6),
            frames: t.map(|t| t.complete_frames().count() as u64),
            deliveries: t.map(|t| t.num_deliveries() as u64),
        });
    }

    let solve_row = |program: &'static str, r: &SolveReport| SolveRow {
        scenario_id: id.clone(),
        program,
        seed,
        k,
        n,
        eta,
        objective: r.objective,
        iterations: r.iterations,
        kkt_residual: r.kkt_residual,
        wall_time_seconds: r.wall_time_seconds,
        columns: r.columns,
        support: r.support,
    };
    if let Metric::Value((_, r)) = &cell.srp {
        out.solves.push(solve_row("srp", r));
    }
    if let Metric::Value((_, r)) = &cell.lower_bound {
        out.solves.push(solve_row("lower-bound", r));
    }

    if let (Some(dist), Some(lbv)) = (cell.srp_dist(), cell.lower_bound_value()) {
        let named: Vec<(&str, &SimTrace)> = cell
            .traces
            .iter()
            .filter_map(|(p, t)| t.as_ref().value().map(|t| (p.as_str(), t)))
            .collect();
        match ratio_report(inst, dist, lbv, &named, scenario.epsilon) {
            Ok(report) => {
                out.report = Some(ReportRecord { scenario_id: id.clone(), seed, k, n, eta, report })
            }
            Err(e) => warn!("{}: ratio report: {e}", point_label(&id, k, n, eta, seed)),
        }
    }
    out
}

/// Runs every (point, seed) cell of `scenario` on a worker pool. Output
/// order is fixed: points in sweep order, then seeds, then policies as listed.
pub fn run_suite(scenario: &Scenario, opts: &RunOptions) -> Result<SuiteResult> {
    scenario.validate()?;
    if let Some(dir) = &opts.trace_dir {
        std::fs::create_dir_all(dir)?;
    }
    let points = scenario.points();
    let cells: Vec<(&LayoutSpec, u64)> =
        points.iter().flat_map(|p| scenario.seeds.iter().map(move |&s| (p, s))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidScenario(format!("worker pool: {e}")))?;
    let started = Instant::now();
    info!("{}: {} cells on {} workers", scenario.id, cells.len(), pool.current_num_threads());
    let outputs: Vec<CellOutput> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(point, seed)| summarize(scenario, point, seed, run_cell(scenario, point, seed, opts)))
            .collect()
    });
    info!("{}: done in {:.1} s", scenario.id, started.elapsed().as_secs_f64());

    let mut result = SuiteResult::default();
    for o in outputs {
        result.rows.extend(o.rows);
        result.solves.extend(o.solves);
        result.reports.extend(o.report);
    }
    Ok(result)
}
