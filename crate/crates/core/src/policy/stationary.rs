use rand::Rng;

use super::{PolicyDecision, ScheduleDistribution};
use crate::model::NetworkInstance;

/// Index of the drawn entry, or `None` for the idle residual.
pub fn sample_entry<R: Rng + ?Sized>(dist: &ScheduleDistribution, rng: &mut R) -> Option<usize> {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (k, e) in dist.entries().iter().enumerate() {
        acc += e.prob;
        if u < acc {
            return Some(k);
        }
    }
    None
}

/// Draws one frame of a stationary randomized policy. Unassigned mass idles
/// for a single slot.
pub fn srp_sample<R: Rng + ?Sized>(
    instance: &NetworkInstance,
    dist: &ScheduleDistribution,
    rng: &mut R,
) -> PolicyDecision {
    match sample_entry(dist, rng) {
        Some(k) => PolicyDecision::for_set(instance.links(), dist.entries()[k].members.clone()),
        None => PolicyDecision::idle(),
    }
}
