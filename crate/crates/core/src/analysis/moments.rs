use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::{DeliverySamples, SimTrace};

/// Exact `sum_t A_i(t)` rebuilt from one user's waiting times, service times
/// and residual. Between deliveries `m-1` and `m` the age climbs from
/// `S[m-1]` for `X = W[m] + S[m]` slots, contributing
/// `X^2 / 2 + (S[m-1] - 1/2) X`; the residual `R` after the last delivery
/// adds `R S[D] + R (R - 1) / 2`. `S[0]` is the initial age.
pub fn sample_path_age_sum(s: &DeliverySamples) -> u64 {
    let mut twice: i128 = 0;
    let mut prev = s.initial_age as i128;
    for (&w, &sv) in s.waiting.iter().zip(&s.service) {
        let x = (w + sv) as i128;
        twice += x * x + (2 * prev - 1) * x;
        prev = sv as i128;
    }
    let r = s.residual as i128;
    twice += 2 * r * prev + r * (r - 1);
    (twice / 2) as u64
}

/// Horizon length implied by the samples, `sum_m (W[m] + S[m]) + R`.
pub fn sample_path_horizon(s: &DeliverySamples) -> u64 {
    s.waiting.iter().zip(&s.service).map(|(w, v)| w + v).sum::<u64>() + s.residual
}

#[derive(Debug, Clone, Serialize)]
pub struct UserMoments {
    pub deliveries: usize,
    pub mean_waiting: f64,
    pub mean_service: f64,
    pub mean_waiting_sq: f64,
    pub mean_service_sq: f64,
    /// Sample mean of `(W + S)^2`.
    pub mean_interval_sq: f64,
    /// Sample mean of `S[m-1] (W[m] + S[m])`, with `S[0] = S[1]`.
    pub mean_cross: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentSummary {
    /// `None` for users without any delivery.
    pub users: Vec<Option<UserMoments>>,
    pub mean_frame: f64,
    pub mean_frame_sq: f64,
    pub complete_frames: usize,
}

fn mean(it: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = it.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

pub fn user_moments(s: &DeliverySamples) -> Option<UserMoments> {
    let d = s.service.len();
    if d == 0 {
        return None;
    }
    let x: Vec<f64> = s.waiting.iter().zip(&s.service).map(|(&w, &v)| (w + v) as f64).collect();
    let prev = std::iter::once(s.service[0]).chain(s.service[..d - 1].iter().copied());
    Some(UserMoments {
        deliveries: d,
        mean_waiting: mean(s.waiting.iter().map(|&w| w as f64)),
        mean_service: mean(s.service.iter().map(|&v| v as f64)),
        mean_waiting_sq: mean(s.waiting.iter().map(|&w| (w * w) as f64)),
        mean_service_sq: mean(s.service.iter().map(|&v| (v * v) as f64)),
        mean_interval_sq: mean(x.iter().map(|v| v * v)),
        mean_cross: mean(prev.zip(&x).map(|(p, v)| p as f64 * v)),
    })
}

/// Sample moments of the complete frames' lengths: `(M[D], M[D^2])`.
pub fn frame_moments(trace: &SimTrace) -> (f64, f64) {
    let lens: Vec<f64> = trace.complete_frames().map(|f| f.len as f64).collect();
    if lens.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    (mean(lens.iter().copied()), mean(lens.iter().map(|l| l * l)))
}

pub fn moment_summary(trace: &SimTrace) -> MomentSummary {
    let (mean_frame, mean_frame_sq) = frame_moments(trace);
    MomentSummary {
        users: (0..trace.num_users()).map(|i| user_moments(&trace.samples(i))).collect(),
        mean_frame,
        mean_frame_sq,
        complete_frames: trace.complete_frames().count(),
    }
}

/// Renewal-reward estimate of the weighted average AoI from delivery
/// samples: per user `M[(W+S)^2] / (2 M[W+S]) + M[S[m-1](W+S)] / M[W+S] - 1/2`.
pub fn renewal_aoi_estimate(trace: &SimTrace) -> Result<f64> {
    let n = trace.num_users();
    let mut total = 0.0;
    for i in 0..n {
        let s = trace.samples(i);
        if s.service.len() < 2 {
            return Err(Error::InsufficientDeliveries { user: i, deliveries: s.service.len() });
        }
        let m = user_moments(&s).expect("at least two deliveries");
        let mx = m.mean_waiting + m.mean_service;
        total += trace.weights[i] * (m.mean_interval_sq / (2.0 * mx) + m.mean_cross / mx - 0.5);
    }
    Ok(total / n as f64)
}

/// Deliveries per slot, `D(T) / T`.
pub fn empirical_throughput(trace: &SimTrace, user: usize) -> f64 {
    trace.deliveries[user].len() as f64 / trace.horizon as f64
}

/// `1 / (M[W] + M[S])`, the renewal form of the throughput.
pub fn renewal_throughput(m: &UserMoments) -> f64 {
    1.0 / (m.mean_waiting + m.mean_service)
}

/// `M[(W+S)^2] / (2 M[W+S]) >= M[W+S] / 2`.
pub fn jensen_holds(m: &UserMoments) -> bool {
    let mx = m.mean_waiting + m.mean_service;
    m.mean_interval_sq / (2.0 * mx) >= mx / 2.0 * (1.0 - 1e-12)
}
