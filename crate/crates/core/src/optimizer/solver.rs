//! Stationary-policy and lower-bound programs, solved over time fractions.
//!
//! Writing `y_S = b_S mu_S / sum_T b_T mu_T` for the share of time spent in
//! frames of set `S` turns both programs into smooth convex minimizations on
//! the probability simplex:
//!
//! * stationary policy: `F(y) = (1/N) sum_i w_i (b.y / 2 + 1/u_i - 1/2)`
//! * lower bound:       `G(y) = (1/N) sum_i w_i (1 / (2 u_i) - 1/2)`
//!
//! with `u_i = sum_{S ∋ i} y_S / b_S`, the delivery rate of user `i`. The
//! empty set is an ordinary column with `b = 1`, so unassigned probability is
//! an idle slot. Only a handful of sets carry mass at the optimum, so the
//! solver keeps a small working set: a projected-gradient master over the
//! working set alternates with pricing over all columns, and stops when the
//! Frank-Wolfe gap over the full simplex is small.

use std::time::Instant;

use serde::Serialize;

use super::program::ConvexProgramData;
use super::simplex::project;
use crate::error::{Error, Result};
use crate::policy::{ScheduleDistribution, ScheduleEntry};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const MAX_ITERATIONS: usize = 100_000;

const ARMIJO: f64 = 1e-4;
const MAX_NEW_COLUMNS: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub objective: f64,
    /// Projected-gradient steps across all master solves.
    pub iterations: usize,
    /// Frank-Wolfe gap at the returned point, an upper bound on the
    /// distance to the optimal objective.
    pub kkt_residual: f64,
    pub wall_time_seconds: f64,
    pub columns: usize,
    pub support: usize,
}

/// Optimal lower-bound solution: its value and the time fractions attaining it.
#[derive(Debug, Clone)]
pub struct LowerBound {
    pub value: f64,
    pub time_fractions: Vec<(usize, f64)>,
    /// `sum_S b_S y_S` at the optimum.
    pub mean_frame_share: f64,
}

#[derive(Clone, Copy)]
enum Program {
    Stationary,
    LowerBound,
}

struct Eval<'a> {
    p: &'a ConvexProgramData,
    kind: Program,
}

impl Eval<'_> {
    /// Fills `u` and returns `b.y`.
    fn rates(&self, cols: &[usize], y: &[f64], u: &mut [f64]) -> f64 {
        u.iter_mut().for_each(|x| *x = 0.0);
        let mut by = 0.0;
        for (&c, &yc) in cols.iter().zip(y) {
            if yc == 0.0 {
                continue;
            }
            let b = self.p.b[c];
            by += b * yc;
            for &i in self.p.column(c) {
                u[i] += yc / b;
            }
        }
        by
    }

    fn value_from(&self, by: f64, u: &[f64]) -> f64 {
        let n = u.len() as f64;
        let mut acc = 0.0;
        for (&w, &ui) in self.p.weights.iter().zip(u) {
            if ui <= 0.0 {
                return f64::INFINITY;
            }
            acc += w * match self.kind {
                Program::Stationary => by / 2.0 + 1.0 / ui - 0.5,
                Program::LowerBound => 0.5 / ui - 0.5,
            };
        }
        acc / n
    }

    fn value(&self, cols: &[usize], y: &[f64], u: &mut [f64]) -> f64 {
        let by = self.rates(cols, y, u);
        self.value_from(by, u)
    }

    /// Partial derivative in `y_c`, given the rates `u` at the current point.
    #[inline]
    fn grad(&self, c: usize, u: &[f64], total_weight: f64) -> f64 {
        let b = self.p.b[c];
        let mut s = 0.0;
        for &i in self.p.column(c) {
            s += self.p.weights[i] / (u[i] * u[i]);
        }
        let n = u.len() as f64;
        match self.kind {
            Program::Stationary => (total_weight * b / 2.0 - s / b) / n,
            Program::LowerBound => -(s / (2.0 * b)) / n,
        }
    }
}

struct Solution {
    cols: Vec<usize>,
    y: Vec<f64>,
    objective: f64,
    gap: f64,
    iterations: usize,
    by: f64,
}

fn solve(p: &ConvexProgramData, kind: Program, tol: f64) -> Result<Solution> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = p.num_users();
    let ev = Eval { p, kind };
    let w_total = p.total_weight();
    let mut u = vec![0.0; n];

    // start from every singleton column, uniformly
    let mut cols: Vec<usize> = (0..p.num_columns()).filter(|&c| p.column(c).len() == 1).collect();
    if cols.len() != n {
        return Err(Error::InvalidInstance("program lacks a singleton column for every user".into()));
    }
    let mut y = vec![1.0 / cols.len() as f64; cols.len()];
    let mut iterations = 0;
    let mut in_cols = vec![false; p.num_columns()];
    cols.iter().for_each(|&c| in_cols[c] = true);

    loop {
        let f = ev.value(&cols, &y, &mut u);
        let inner_tol = 0.25 * tol * f.abs().max(1.0);
        iterations += master(&ev, &cols, &mut y, inner_tol, MAX_ITERATIONS.saturating_sub(iterations), &mut u);

        let by = ev.rates(&cols, &y, &mut u);
        let f = ev.value_from(by, &u);
        let gy: f64 = cols.iter().zip(&y).map(|(&c, &yc)| yc * ev.grad(c, &u, w_total)).sum();
        let mut priced: Vec<(f64, usize)> =
            (0..p.num_columns()).map(|c| (ev.grad(c, &u, w_total), c)).collect();
        let gmin = priced.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
        let gap = (gy - gmin).max(0.0);
        if gap <= tol * f.abs().max(1.0) {
            return Ok(Solution { cols, y, objective: f, gap, iterations, by });
        }
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NonConvergence { iterations, gap });
        }

        // keep the support, drop the rest, bring in the most improving columns
        let mut next_cols = Vec::with_capacity(cols.len() + MAX_NEW_COLUMNS);
        let mut next_y = Vec::with_capacity(cols.len() + MAX_NEW_COLUMNS);
        in_cols.iter_mut().for_each(|x| *x = false);
        for (&c, &yc) in cols.iter().zip(&y) {
            if yc > 0.0 {
                next_cols.push(c);
                next_y.push(yc);
                in_cols[c] = true;
            }
        }
        priced.retain(|&(g, c)| g < gy && !in_cols[c]);
        priced.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, c) in priced.iter().take(MAX_NEW_COLUMNS) {
            next_cols.push(c);
            next_y.push(0.0);
            in_cols[c] = true;
        }
        cols = next_cols;
        y = next_y;
    }
}

/// Projected gradient with Barzilai-Borwein steps and Armijo backtracking on
/// the simplex over `cols`. Returns the number of steps taken.
fn master(ev: &Eval, cols: &[usize], y: &mut [f64], tol: f64, max_steps: usize, u: &mut [f64]) -> usize {
    let w_total = ev.p.total_weight();
    let m = cols.len();
    let mut f = ev.value(cols, y, u);
    let mut g: Vec<f64> = cols.iter().map(|&c| ev.grad(c, u, w_total)).collect();
    let mut step = 1.0 / g.iter().map(|x| x.abs()).fold(1e-300, f64::max);
    let mut trial = vec![0.0; m];
    let mut steps = 0;
    while steps < max_steps {
        let gy: f64 = g.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        let gmin = g.iter().copied().fold(f64::INFINITY, f64::min);
        if gy - gmin <= tol {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            for k in 0..m {
                trial[k] = y[k] - step * g[k];
            }
            project(&mut trial);
            let dec: f64 = (0..m).map(|k| g[k] * (trial[k] - y[k])).sum();
            let ft = ev.value(cols, &trial, u);
            if ft <= f + ARMIJO * dec {
                debug_assert!(ft <= f);
                accepted = true;
                f = ft;
                break;
            }
            step *= 0.5;
        }
        steps += 1;
        if !accepted {
            break;
        }
        // u now holds the rates at `trial`
        let g_new: Vec<f64> = cols.iter().map(|&c| ev.grad(c, u, w_total)).collect();
        let mut ss = 0.0;
        let mut sy = 0.0;
        for k in 0..m {
            let s = trial[k] - y[k];
            ss += s * s;
            sy += s * (g_new[k] - g[k]);
        }
        y.copy_from_slice(&trial);
        g = g_new;
        if ss == 0.0 {
            break;
        }
        step = if sy > 0.0 { (ss / sy).clamp(1e-14, 1e14) } else { step * 4.0 };
    }
    steps
}

fn report(p: &ConvexProgramData, s: &Solution, started: Instant) -> SolveReport {
    SolveReport {
        objective: s.objective,
        iterations: s.iterations,
        kkt_residual: s.gap,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        columns: p.num_columns(),
        support: s.y.iter().filter(|&&v| v > 0.0).count(),
    }
}

/// Set probabilities from time fractions: `mu_S ∝ y_S / b_S`. The empty
/// set's share is left to the idle residual.
fn to_distribution(p: &ConvexProgramData, cols: &[usize], y: &[f64]) -> Result<ScheduleDistribution> {
    let norm: f64 = cols.iter().zip(y).map(|(&c, &yc)| yc / p.b[c]).sum();
    let mut entries: Vec<ScheduleEntry> = cols
        .iter()
        .zip(y)
        .filter(|&(&c, &yc)| yc > 0.0 && !p.sets[c].is_empty())
        .map(|(&c, &yc)| ScheduleEntry { members: p.sets[c].clone(), prob: yc / p.b[c] / norm })
        .collect();
    entries.sort_by(|a, b| a.members.cmp(&b.members));
    let dist = ScheduleDistribution::try_from(entries)?;
    for i in 0..p.num_users() {
        if dist.mass_on(i) <= 0.0 {
            return Err(Error::StarvedUser(i));
        }
    }
    Ok(dist)
}

/// Optimal stationary randomized policy. The report's objective is its
/// expected weighted average AoI in slots.
pub fn solve_srp(program: &ConvexProgramData, tolerance: f64) -> Result<(ScheduleDistribution, SolveReport)> {
    let started = Instant::now();
    let s = solve(program, Program::Stationary, tolerance)?;
    let dist = to_distribution(program, &s.cols, &s.y)?;
    Ok((dist, report(program, &s, started)))
}

/// Throughput lower bound on the weighted average AoI of any policy, in slots.
pub fn solve_lower_bound(program: &ConvexProgramData, tolerance: f64) -> Result<(LowerBound, SolveReport)> {
    let started = Instant::now();
    let s = solve(program, Program::LowerBound, tolerance)?;
    let rep = report(program, &s, started);
    let time_fractions = s.cols.iter().zip(&s.y).filter(|(_, &v)| v > 0.0).map(|(&c, &v)| (c, v)).collect();
    Ok((LowerBound { value: s.objective, time_fractions, mean_frame_share: s.by }, rep))
}
