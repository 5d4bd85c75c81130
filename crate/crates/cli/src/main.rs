use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use mapaoi::experiments::{
    bench_decision_time, gen_hex, gen_two_ap, run_suite, write_csv, write_suite, HexParams, LayoutSpec,
    PhysicsOverrides, RunOptions, Scenario, TwoApParams, MW_DEFAULT_MAX_APS,
};
use mapaoi::model::NetworkInstance;
use mapaoi::optimizer::{build_program, solve_lower_bound, solve_srp, DEFAULT_COLUMN_BUDGET, DEFAULT_TOLERANCE};
use mapaoi::policy::{ApproxMaxWeight, MaxWeight, Policy, DEFAULT_EPSILON};

#[derive(Parser)]
#[command(name = "mapaoi", version, about = "Age-of-Information scheduling experiments for multi-AP WLANs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every point, policy and seed of a scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Two APs, overlap factor swept over [0, 0.5], N in {10, 20}.
    SweepEta(SweepFlags),
    /// Hexagonal grids with K in {3, 6, 9} and five users per cell.
    SweepK(SweepFlags),
    /// Optimal stationary randomized policy for an instance.
    SolveSrp(SolveFlags),
    /// Lower bound on the weighted average AoI of any policy.
    LowerBound(SolveFlags),
    /// Per-frame decision time of MW and AMW on random age states.
    Bench(BenchFlags),
    /// Write a random instance as JSON.
    GenInstance(GenFlags),
}

#[derive(Args)]
struct RunFlags {
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Also write each simulation's frame log as JSON lines.
    #[arg(long)]
    dump_trace: bool,
    /// Run exhaustive MW on grids with more than six APs.
    #[arg(long)]
    force_mw: bool,
}

#[derive(Args)]
struct SweepFlags {
    #[command(flatten)]
    run: RunFlags,
    /// Comma-separated seeds (default 1..=10).
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    #[arg(long)]
    horizon_slots: Option<u64>,
}

#[derive(Args)]
struct SolveFlags {
    instance: PathBuf,
    /// Write the result JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_COLUMN_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct BenchFlags {
    /// Instance to time; without it the K-sweep grids are generated.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    states: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Output directory for decision_times.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Time exhaustive MW on grids with more than six APs.
    #[arg(long)]
    force_mw: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutKind {
    TwoAp,
    Hex,
}

#[derive(Args)]
struct GenFlags {
    #[arg(value_enum)]
    layout: LayoutKind,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Overlap factor between the two APs.
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Users per AP or per cell.
    #[arg(long, default_value_t = 5)]
    users: usize,
    /// Number of hexagonal cells (3, 6 or 9).
    #[arg(long, default_value_t = 9)]
    num_aps: usize,
    #[arg(long)]
    pathloss_exponent: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn options(f: &RunFlags) -> RunOptions {
    RunOptions {
        workers: f.workers,
        force_mw: f.force_mw,
        trace_dir: f.dump_trace.then(|| f.out.join("traces")),
        column_budget: None,
    }
}

fn run(scenario: &Scenario, flags: &RunFlags) -> Result<()> {
    let result = run_suite(scenario, &options(flags))?;
    let files = write_suite(&flags.out, &result)
        .with_context(|| format!("writing results to {}", flags.out.display()))?;
    println!(
        "{} rows -> {}\n{} solver rows -> {}\nsummary -> {}\n{} reports",
        result.rows.len(),
        files.results.display(),
        result.solves.len(),
        files.timing.display(),
        files.summary.display(),
        files.reports.len()
    );
    Ok(())
}

fn sweep(mut scenario: Scenario, flags: &SweepFlags) -> Result<()> {
    if let Some(s) = &flags.seeds {
        scenario.seeds = s.clone();
    }
    if let Some(h) = flags.horizon_slots {
        scenario.horizon_slots = h;
    }
    run(&scenario, &flags.run)
}

fn emit(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn load_instance(path: &Path) -> Result<NetworkInstance> {
    NetworkInstance::load(path).with_context(|| format!("loading instance {}", path.display()))
}

fn solve_srp_cmd(f: &SolveFlags) -> Result<()> {
    let inst = load_instance(&f.instance)?;
    let prog = build_program(&inst, f.budget)?;
    let (dist, report) = solve_srp(&prog, f.tolerance)?;
    let closed_form = mapaoi::analysis::srp_expected_aoi(&inst, &dist)?;
    #[derive(Serialize)]
    struct Out<'a> {
        expected_aoi: f64,
        report: mapaoi::optimizer::SolveReport,
        distribution: &'a mapaoi::policy::ScheduleDistribution,
    }
    emit(f.out.as_deref(), &Out { expected_aoi: closed_form, report, distribution: &dist })
}

fn lower_bound_cmd(f: &SolveFlags) -> Result<()> {
    let inst = load_instance(&f.instance)?;
    let prog = build_program(&inst, f.budget)?;
    let (lb, report) = solve_lower_bound(&prog, f.tolerance)?;
    #[derive(Serialize)]
    struct Fraction<'a> {
        members: &'a [usize],
        fraction: f64,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        value: f64,
        mean_frame_share: f64,
        report: mapaoi::optimizer::SolveReport,
        time_fractions: Vec<Fraction<'a>>,
    }
    let time_fractions =
        lb.time_fractions.iter().map(|&(c, y)| Fraction { members: prog.column(c), fraction: y }).collect();
    emit(f.out.as_deref(), &Out { value: lb.value, mean_frame_share: lb.mean_frame_share, report, time_fractions })
}

#[derive(Serialize)]
struct BenchRow {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    policy: String,
    states: usize,
    mean_us: f64,
    median_us: f64,
    max_us: f64,
}

fn bench_cmd(f: &BenchFlags) -> Result<()> {
    let instances = match &f.instance {
        Some(p) => vec![load_instance(p)?],
        None => Scenario::k_sweep()
            .points()
            .iter()
            .map(|p| {
                let physics = PhysicsOverrides::default().resolve(p)?;
                Ok(p.generate(physics, f.seed)?)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let amw = ApproxMaxWeight { epsilon: f.epsilon };
    let mut rows = Vec::new();
    println!("{:>3} {:>3}  {:<6} {:>12} {:>12} {:>12}", "K", "N", "policy", "mean_us", "median_us", "max_us");
    for inst in &instances {
        let mut policies: Vec<&dyn Policy> = vec![&amw];
        if f.force_mw || inst.num_aps() <= MW_DEFAULT_MAX_APS {
            policies.insert(0, &MaxWeight);
        }
        for p in policies {
            info!("timing {} on K={} N={}", p.name(), inst.num_aps(), inst.num_users());
            let t = bench_decision_time(inst, p, f.states, f.seed);
            println!(
                "{:>3} {:>3}  {:<6} {:>12.3} {:>12.3} {:>12.3}",
                inst.num_aps(),
                inst.num_users(),
                p.name(),
                t.mean_us,
                t.median_us,
                t.max_us
            );
            rows.push(BenchRow {
                k: inst.num_aps(),
                n: inst.num_users(),
                policy: p.name().into(),
                states: t.states,
                mean_us: t.mean_us,
                median_us: t.median_us,
                max_us: t.max_us,
            });
        }
    }
    if let Some(dir) = &f.out {
        std::fs::create_dir_all(dir)?;
        write_csv(std::fs::File::create(dir.join("decision_times.csv"))?, &rows)?;
    }
    Ok(())
}

fn gen_cmd(f: &GenFlags) -> Result<()> {
    let layout = match f.layout {
        LayoutKind::TwoAp => LayoutSpec::TwoAp(TwoApParams { eta: f.eta, users_per_ap: f.users, ..Default::default() }),
        LayoutKind::Hex => LayoutSpec::Hex(HexParams { num_aps: f.num_aps, users_per_cell: f.users, ..Default::default() }),
    };
    let overrides = PhysicsOverrides { pathloss_exponent: f.pathloss_exponent, ..Default::default() };
    let physics = overrides.resolve(&layout)?;
    let inst = match &layout {
        LayoutSpec::TwoAp(p) => gen_two_ap(p, physics, f.seed)?,
        LayoutSpec::Hex(p) => gen_hex(p, physics, f.seed)?,
    };
    emit(f.out.as_deref(), &inst)
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Run { scenario, run: flags } => {
            let s = Scenario::load(scenario).with_context(|| format!("loading scenario {}", scenario.display()))?;
            run(&s, flags)
        }
        Command::SweepEta(f) => sweep(Scenario::eta_sweep(), f),
        Command::SweepK(f) => sweep(Scenario::k_sweep(), f),
        Command::SolveSrp(f) => solve_srp_cmd(f),
        Command::LowerBound(f) => lower_bound_cmd(f),
        Command::Bench(f) => {
            if f.states == 0 {
                bail!("--states must be at least 1");
            }
            bench_cmd(f)
        }
        Command::GenInstance(f) => gen_cmd(f),
    }
}
