//! Schedulers: exhaustive Max-Weight, its local-search approximation,
//! stationary randomized sampling and the per-AP baseline.

mod ages;
mod baseline;
mod decision;
mod drift;
mod local_search;
mod max_weight;
mod stationary;


pub use ages::AgeState;
pub use baseline::{baseline_frame_select, baseline_single_ap_select};
pub(crate) use baseline::best_in_cell;
pub use decision::{PolicyDecision, ScheduleDistribution, ScheduleEntry, MASS_TOLERANCE};
pub use drift::{drift_index, drift_ratio};
pub use local_search::{amw_select, amw_select_traced, LocalSearchTrace, PassTrace, DEFAULT_EPSILON};
pub use max_weight::mw_select;
pub use stationary::{sample_entry, srp_sample};

use crate::model::NetworkInstance;
use crate::rng::SimRng;

/// A frame-level scheduler. Implementations hold no mutable state; all
/// randomness comes from the stream passed in.
pub trait Policy: Send + Sync {
    fn name(&self) -> &str;
    fn select(&self, instance: &NetworkInstance, ages: &AgeState, rng: &mut SimRng) -> PolicyDecision;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MaxWeight;

impl Policy for MaxWeight {
    fn name(&self) -> &str {
        "mw"
    }

    fn select(&self, instance: &NetworkInstance, ages: &AgeState, _: &mut SimRng) -> PolicyDecision {
        mw_select(instance, ages)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ApproxMaxWeight {
    pub epsilon: f64,
}

impl Default for ApproxMaxWeight {
    fn default() -> Self {
        Self { epsilon: DEFAULT_EPSILON }
    }
}

impl Policy for ApproxMaxWeight {
    fn name(&self) -> &str {
        "amw"
    }

    fn select(&self, instance: &NetworkInstance, ages: &AgeState, _: &mut SimRng) -> PolicyDecision {
        amw_select(instance, ages, self.epsilon)
    }
}

#[derive(Debug, Clone)]
pub struct Stationary {
    pub dist: ScheduleDistribution,
}

impl Policy for Stationary {
    fn name(&self) -> &str {
        "srp"
    }

    fn select(&self, instance: &NetworkInstance, _: &AgeState, rng: &mut SimRng) -> PolicyDecision {
        srp_sample(instance, &self.dist, rng)
    }
}

/// Each AP's single-cell choice, launched together as one frame.
#[derive(Debug, Clone, Copy, Default)]
pub struct PerApMaxWeight;

impl Policy for PerApMaxWeight {
    fn name(&self) -> &str {
        "per-ap-mw"
    }

    fn select(&self, instance: &NetworkInstance, ages: &AgeState, _: &mut SimRng) -> PolicyDecision {
        baseline_frame_select(instance, ages)
    }
}
