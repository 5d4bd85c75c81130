//! Brute-force grid search over set probabilities, for checking the
//! solvers on families of at most six sets.

use crate::error::{Error, Result};
use crate::model::{feasible_sets, family_size, ActivationSet, NetworkInstance};
use crate::policy::{ScheduleDistribution, ScheduleEntry};

pub const MAX_ORACLE_SETS: usize = 6;

/// Calls `visit` with every vector of `parts` non-negative integers summing
/// to `total`.
fn compositions(total: usize, parts: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if k + 1 == cur.len() {
            cur[k] = left;
            visit(cur);
            return;
        }
        for v in 0..=left {
            cur[k] = v;
            rec(k + 1, left - v, cur, visit);
        }
    }
    let mut cur = vec![0; parts];
    rec(0, total, &mut cur, visit);
}

struct Family {
    sets: Vec<ActivationSet>,
    delta: Vec<f64>,
    weights: Vec<f64>,
}

fn family(instance: &NetworkInstance) -> Result<Family> {
    let size = family_size(instance);
    if size > MAX_ORACLE_SETS as u128 {
        return Err(Error::OracleTooLarge(format!("{size} feasible sets, the grid oracle allows {MAX_ORACLE_SETS}")));
    }
    let sets: Vec<ActivationSet> = feasible_sets(instance).collect();
    let delta = sets.iter().map(|s| crate::model::frame_length(instance, s) as f64).collect();
    Ok(Family { sets, delta, weights: instance.weights().to_vec() })
}

/// Evaluates `per_user(E[Delta], E[Delta^2], gamma_i)` summed with weights
/// over the grid and returns the minimizer.
fn grid_search(
    instance: &NetworkInstance,
    grid_step: f64,
    per_user: impl Fn(f64, f64, f64) -> f64,
) -> Result<(ScheduleDistribution, f64)> {
    assert!(grid_step > 0.0 && grid_step <= 1.0, "grid step must lie in (0, 1]");
    let fam = family(instance)?;
    let steps = (1.0 / grid_step).round() as usize;
    let n = fam.weights.len();
    let mut best = (f64::INFINITY, Vec::new());
    let mut gamma = vec![0.0; n];
    compositions(steps, fam.sets.len(), &mut |parts| {
        let mu: Vec<f64> = parts.iter().map(|&p| p as f64 / steps as f64).collect();
        let m1: f64 = mu.iter().zip(&fam.delta).map(|(m, d)| m * d).sum();
        let m2: f64 = mu.iter().zip(&fam.delta).map(|(m, d)| m * d * d).sum();
        gamma.iter_mut().for_each(|g| *g = 0.0);
        for (s, m) in fam.sets.iter().zip(&mu) {
            for &i in s.members() {
                gamma[i] += m;
            }
        }
        let mut total = 0.0;
        for i in 0..n {
            if gamma[i] == 0.0 {
                return;
            }
            total += fam.weights[i] * per_user(m1, m2, gamma[i]);
        }
        let v = total / n as f64;
        if v < best.0 {
            best = (v, mu);
        }
    });
    let (value, mu) = best;
    let entries: Vec<ScheduleEntry> = fam
        .sets
        .into_iter()
        .zip(mu)
        .filter(|(s, p)| *p > 0.0 && !s.is_empty())
        .map(|(members, prob)| ScheduleEntry { members, prob })
        .collect();
    Ok((ScheduleDistribution::try_from(entries)?, value))
}

/// Best stationary policy on a probability grid, scored by its closed-form
/// expected weighted AoI `E[D^2] / (2 E[D]) + E[D] / gamma_i - 1/2`.
pub fn srp_oracle(instance: &NetworkInstance, grid_step: f64) -> Result<(ScheduleDistribution, f64)> {
    grid_search(instance, grid_step, |m1, m2, g| m2 / (2.0 * m1) + m1 / g - 0.5)
}

/// Smallest throughput bound `E[D] / (2 gamma_i) - 1/2` on the same grid.
pub fn lower_bound_oracle(instance: &NetworkInstance, grid_step: f64) -> Result<(ScheduleDistribution, f64)> {
    grid_search(instance, grid_step, |m1, _, g| m1 / (2.0 * g) - 0.5)
}
