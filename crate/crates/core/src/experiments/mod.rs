//! Scenario generation, multi-seed experiment runs and result export.

mod bench;
mod layouts;
mod output;
mod runner;
mod scenario;

#[cfg(test)]
mod tests;

pub use bench::{bench_decision_time, bench_states, DecisionTiming, MAX_BENCH_AGE, WARMUP_CALLS};
pub use layouts::{gen_hex, gen_two_ap, hex_adjacent, HexParams, TwoApParams, HEX_PATHLOSS, REUSE_CHANNELS, TWO_AP_PATHLOSS};
pub use output::{
    summarize, write_csv, write_results, write_suite, SuiteFiles, SummaryRow, REPORTS_DIR, RESULTS_FILE,
    RESULT_COLUMNS, SUMMARY_FILE, TIMING_FILE,
};
pub use runner::{run_cell, run_suite, CellRun, Metric, ReportRecord, ResultRow, RunOptions, SolveRow, SuiteResult};
pub use scenario::{LayoutSpec, PhysicsOverrides, PolicySpec, Scenario, SweepSpec, MW_DEFAULT_MAX_APS};
