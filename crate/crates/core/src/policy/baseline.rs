use super::{AgeState, PolicyDecision};
use crate::error::Result;
use crate::model::{ActivationSet, LinkModel, NetworkInstance};

/// Single-cell Max-Weight index `w_i (2 A_i + A_i^2 / tau_i)` with the
/// interference-free transmission time.
#[inline]
pub(crate) fn single_ap_index(links: &LinkModel, age: u64, user: usize) -> f64 {
    let a = age as f64;
    links.weights()[user] * (2.0 * a + a * a / links.solo_tau()[user] as f64)
}

pub(crate) fn best_in_cell(links: &LinkModel, ages: &[u64], cell: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &u in cell {
        let v = single_ap_index(links, ages[u], u);
        match best {
            Some((_, bv)) if v <= bv => {}
            _ => best = Some((u, v)),
        }
    }
    best.map(|(u, _)| u)
}

/// The user `ap` would serve next on its own, ignoring every other cell.
/// Ties go to the lowest id; `None` only for an empty cell.
pub fn baseline_single_ap_select(instance: &NetworkInstance, ages: &AgeState, ap: usize) -> Result<Option<usize>> {
    let cell = instance.cell(ap)?;
    Ok(best_in_cell(instance.links(), &ages.ages, cell))
}

/// Every AP's local choice, started together as one frame. Only meaningful
/// as a frame-synchronous reference; the baseline proper runs asynchronously.
pub fn baseline_frame_select(instance: &NetworkInstance, ages: &AgeState) -> PolicyDecision {
    let links = instance.links();
    let members = links.cells().iter().filter_map(|c| best_in_cell(links, &ages.ages, c)).collect();
    PolicyDecision::for_set(links, ActivationSet::from_unsorted_unchecked(members))
}
