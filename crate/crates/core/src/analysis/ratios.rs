use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::moments::frame_moments;
use crate::error::{Error, Result};
use crate::model::NetworkInstance;
use crate::optimizer::LowerBound;
use crate::policy::ScheduleDistribution;
use crate::sim::SimTrace;

/// Expected weighted average AoI of a stationary randomized policy, in slots:
/// `(1/N) sum_i w_i (E[D^2] / (2 E[D]) + E[D] / gamma_i - 1/2)` where the
/// expectations run over the drawn frame length (idle draws last one slot)
/// and `gamma_i` is the probability that user `i` is scheduled.
pub fn srp_expected_aoi(instance: &NetworkInstance, dist: &ScheduleDistribution) -> Result<f64> {
    let n = instance.num_users();
    let idle = dist.idle_mass();
    let mut m1 = idle;
    let mut m2 = idle;
    let mut gamma = vec![0.0; n];
    for e in dist.entries() {
        let d = instance.links().frame_len(e.members.members()) as f64;
        m1 += e.prob * d;
        m2 += e.prob * d * d;
        for &i in e.members.members() {
            gamma[i] += e.prob;
        }
    }
    let mut total = 0.0;
    for (i, &g) in gamma.iter().enumerate() {
        if g <= 0.0 {
            return Err(Error::StarvedUser(i));
        }
        total += instance.weights()[i] * (m2 / (2.0 * m1) + m1 / g - 0.5);
    }
    Ok(total / n as f64)
}

/// Mean frame length of a stationary policy, idle draws included.
pub fn srp_mean_frame(instance: &NetworkInstance, dist: &ScheduleDistribution) -> f64 {
    dist.idle_mass()
        + dist.entries().iter().map(|e| e.prob * instance.links().frame_len(e.members.members()) as f64).sum::<f64>()
}

fn weight_scale(instance: &NetworkInstance) -> f64 {
    instance.total_weight() / (2.0 * instance.num_users() as f64)
}

/// `(W / 2N) (E_LB[D^2] / E_LB[D] + 1)` at the lower bound's optimizer.
pub fn psi_lb(instance: &NetworkInstance, lb: &LowerBound) -> f64 {
    weight_scale(instance) * (lb.mean_frame_share + 1.0)
}

/// `(W / 2N) (M[D^2] / M[D] - 1)` over the trace's complete frames.
pub fn psi_frames(instance: &NetworkInstance, trace: &SimTrace) -> f64 {
    let (m1, m2) = frame_moments(trace);
    weight_scale(instance) * (m2 / m1 - 1.0)
}

fn na<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("n/a"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    #[serde(serialize_with = "na")]
    pub ratio: Option<f64>,
    #[serde(serialize_with = "na")]
    pub bound: Option<f64>,
    pub holds: Option<bool>,
}

impl BoundCheck {
    fn new(ratio: Option<f64>, bound: Option<f64>) -> Self {
        let holds = ratio.zip(bound).map(|(r, b)| r <= b);
        Self { ratio, bound, holds }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub lower_bound: f64,
    pub srp_closed_form: f64,
    pub simulated: BTreeMap<String, f64>,
    pub psi_lb: f64,
    #[serde(serialize_with = "na")]
    pub psi_mw: Option<f64>,
    #[serde(serialize_with = "na")]
    pub psi_amw: Option<f64>,
    pub mean_frame_srp: f64,
    pub epsilon: f64,
    pub srp: BoundCheck,
    pub mw: BoundCheck,
    pub amw: BoundCheck,
}

/// Optimality ratios against the lower bound and their guaranteed ceilings.
///
/// `traces` maps policy names to simulated runs; `mw` and `amw` entries, if
/// present, feed the frame-based constants of their bounds. With a zero lower
/// bound every ratio is reported as not applicable.
pub fn ratio_report(
    instance: &NetworkInstance,
    srp: &ScheduleDistribution,
    lb: &LowerBound,
    traces: &[(&str, &SimTrace)],
    epsilon: f64,
) -> Result<RatioReport> {
    let l_b = lb.value;
    let srp_closed_form = srp_expected_aoi(instance, srp)?;
    let psi_lb = psi_lb(instance, lb);
    let mean_frame_srp = srp_mean_frame(instance, srp);
    let simulated: BTreeMap<String, f64> =
        traces.iter().map(|(name, t)| (name.to_string(), t.weighted_average_aoi())).collect();
    let trace_of = |name: &str| traces.iter().find(|(n, _)| *n == name).map(|(_, t)| *t);
    let psi_mw = trace_of("mw").map(|t| psi_frames(instance, t));
    let psi_amw = trace_of("amw").map(|t| psi_frames(instance, t));

    let positive = l_b > 0.0;
    let ratio = |j: Option<f64>| j.filter(|_| positive).map(|j| j / l_b);
    let sr_bound = positive.then(|| 2.0 + psi_lb / l_b);
    let root = (2.0 * mean_frame_srp).sqrt();
    let mw_bound = sr_bound.zip(psi_mw).map(|(a, p)| a * (root + p / l_b));
    let amw_bound = sr_bound.zip(psi_amw).map(|(a, p)| a * ((4.0 + epsilon) * root + p / l_b));

    Ok(RatioReport {
        lower_bound: l_b,
        srp_closed_form,
        psi_lb,
        psi_mw,
        psi_amw,
        mean_frame_srp,
        epsilon,
        srp: BoundCheck::new(ratio(Some(srp_closed_form)), sr_bound),
        mw: BoundCheck::new(ratio(simulated.get("mw").copied()), mw_bound),
        amw: BoundCheck::new(ratio(simulated.get("amw").copied()), amw_bound),
        simulated,
    })
}
