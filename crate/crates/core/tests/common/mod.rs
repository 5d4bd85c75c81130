//! Oracles and builders shared by the integration tests. Nothing here calls
//! into the schedulers or the optimizer.

#![allow(dead_code)]

use std::io::Write;

use mapaoi::model::{AccessPoint, NetworkInstance, OverlapModel, PhysicsParams, Position};
use mapaoi::policy::{AgeState, ScheduleDistribution, ScheduleEntry};

/// Prints a criterion verdict past the test harness's output capture, then
/// fails the test if it did not hold.
pub fn verdict(name: &str, pass: bool, detail: impl AsRef<str>) {
    let line = format!("{} {name}: {}\n", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(pass, "{name}: {}", detail.as_ref());
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn sample_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

pub fn std_err(v: &[f64]) -> f64 {
    sample_sd(v) / (v.len() as f64).sqrt()
}

/// APs 30 m apart on the x axis; the m-th user of an AP sits `5 + m` meters
/// above it.
pub fn line(sizes: &[usize], eta: f64) -> NetworkInstance {
    let aps: Vec<AccessPoint> = (0..sizes.len())
        .map(|k| AccessPoint { id: k, position: Position::new(30.0 * k as f64, 0.0), channel: 1 })
        .collect();
    let pos: Vec<Position> = sizes
        .iter()
        .enumerate()
        .flat_map(|(k, &s)| (0..s).map(move |m| Position::new(30.0 * k as f64, 5.0 + m as f64)))
        .collect();
    let w = vec![1.0; pos.len()];
    NetworkInstance::from_positions(aps, &pos, &w, PhysicsParams::default(), &OverlapModel::Uniform { eta }).unwrap()
}

/// Transmission time of `user` among `active`, straight from positions.
pub fn reference_tau(net: &NetworkInstance, user: usize, active: &[usize]) -> u64 {
    let p = net.physics();
    let ap = net.aps()[net.users()[user].ap_id].position;
    let rx = |d: f64| p.tx_power_watts * d.powf(-p.pathloss_exponent);
    let mut intf = 0.0;
    for &j in active {
        if j != user {
            intf += net.overlap()[user][j] * rx(net.users()[j].position.distance(&ap));
        }
    }
    let sinr = rx(net.users()[user].position.distance(&ap)) / (p.noise_density_w_per_hz * p.bandwidth_hz + intf);
    let seconds = p.update_size_bits as f64 / (p.bandwidth_hz * (1.0 + sinr).log2());
    (seconds / p.slot_seconds).ceil() as u64
}

/// Every set with at most one user per AP, by brute force over subsets.
pub fn all_feasible(net: &NetworkInstance) -> Vec<Vec<usize>> {
    let n = net.num_users();
    assert!(n <= 20);
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| {
            let mut aps: Vec<_> = s.iter().map(|&u| net.users()[u].ap_id).collect();
            aps.sort_unstable();
            aps.windows(2).all(|w| w[0] != w[1])
        })
        .collect()
}

/// Exhaustive Max-Weight with integer weights, compared exactly.
///
/// The index of `S` with frame `D` is `(D sum_S 2 w A + sum_S w A^2 - W D^2) / D`;
/// numerators and denominators are integers, so two sets are compared by
/// cross-multiplying. Ties go to the lexicographically smallest member list.
pub fn exact_max_weight(net: &NetworkInstance, ages: &AgeState) -> Vec<usize> {
    let w: Vec<i128> = net
        .weights()
        .iter()
        .map(|&x| {
            assert!(x.fract() == 0.0, "exact oracle needs integer weights");
            x as i128
        })
        .collect();
    let total: i128 = w.iter().sum();
    let mut best: Option<(i128, i128, Vec<usize>)> = None;
    for s in all_feasible(net) {
        let d = s.iter().map(|&u| reference_tau(net, u, &s)).max().unwrap_or(1) as i128;
        let lin: i128 = s.iter().map(|&u| 2 * w[u] * ages.ages[u] as i128).sum();
        let quad: i128 = s.iter().map(|&u| w[u] * (ages.ages[u] as i128).pow(2)).sum();
        let num = d * lin + quad - total * d * d;
        let take = match &best {
            None => true,
            Some((bn, bd, bs)) => {
                let (l, r) = (num * bd, bn * d);
                l > r || (l == r && s < *bs)
            }
        };
        if take {
            best = Some((num, d, s));
        }
    }
    best.unwrap().2
}

fn frame(net: &NetworkInstance, members: &[usize]) -> f64 {
    members.iter().map(|&u| reference_tau(net, u, members)).max().unwrap_or(1) as f64
}

fn moments(net: &NetworkInstance, dist: &ScheduleDistribution) -> (f64, f64) {
    let mut m1 = dist.idle_mass();
    let mut m2 = dist.idle_mass();
    for e in dist.entries() {
        let d = frame(net, e.members.members());
        m1 += e.prob * d;
        m2 += e.prob * d * d;
    }
    (m1, m2)
}

/// Expected weighted AoI of a stationary randomized policy,
/// `(1/N) sum_i w_i (E[D^2] / (2 E[D]) + E[D] / gamma_i - 1/2)`.
pub fn srp_closed_form(net: &NetworkInstance, dist: &ScheduleDistribution) -> f64 {
    let (m1, m2) = moments(net, dist);
    let n = net.num_users();
    (0..n).map(|i| net.weights()[i] * (m2 / (2.0 * m1) + m1 / dist.mass_on(i) - 0.5)).sum::<f64>() / n as f64
}

/// Lower-bound objective `(1/N) sum_i w_i (E[D] / (2 gamma_i) - 1/2)` of the
/// same distribution.
pub fn lower_bound_form(net: &NetworkInstance, dist: &ScheduleDistribution) -> f64 {
    let (m1, _) = moments(net, dist);
    let n = net.num_users();
    (0..n).map(|i| net.weights()[i] * (m1 / (2.0 * dist.mass_on(i)) - 0.5)).sum::<f64>() / n as f64
}

/// Probabilities rounded onto a grid of `step`, or `None` if rounding drops
/// a set entirely.
pub fn round_to_grid(dist: &ScheduleDistribution, step: f64) -> Option<ScheduleDistribution> {
    let steps = (1.0 / step).round() as i64;
    let mut parts: Vec<(_, i64)> =
        dist.entries().iter().map(|e| (e.members.clone(), (e.prob * steps as f64).round() as i64)).collect();
    let used: i64 = parts.iter().map(|p| p.1).sum();
    if used > steps {
        let k = parts.iter().enumerate().max_by_key(|p| p.1 .1).unwrap().0;
        parts[k].1 -= used - steps;
    }
    if parts.iter().any(|p| p.1 <= 0) {
        return None;
    }
    let entries: Vec<ScheduleEntry> =
        parts.into_iter().map(|(members, k)| ScheduleEntry { members, prob: k as f64 / steps as f64 }).collect();
    ScheduleDistribution::try_from(entries).ok()
}
