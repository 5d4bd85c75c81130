//! Physical network model: geometry, SINR-driven transmission times, frame
//! lengths and the partition-matroid family of feasible activation sets.

mod activation;
mod links;
mod network;
mod overlap;
mod physics;

#[cfg(test)]
pub(crate) mod testing;

pub use activation::{family_size, feasible_sets, ActivationSet, FeasibleSets};
pub use links::{LinkModel, PAIR_TABLE_MAX_USERS};
pub use network::{closest_ap, AccessPoint, NetworkInstance, Position, UserNode};
pub use overlap::{channel_overlap, overlap_from_channels, OverlapModel};
pub use physics::{dbm_per_hz_to_watts, PhysicsParams, DEFAULT_UPDATE_BITS};

use crate::error::{Error, Result};

fn check_member(instance: &NetworkInstance, user: usize, active: &ActivationSet) -> Result<()> {
    if !active.contains(user) {
        return Err(Error::NotActive { user });
    }
    if !active.is_feasible(instance) {
        return Err(Error::Infeasible(format!("{:?}", active.members())));
    }
    Ok(())
}

/// Linear SINR of `user` at its AP while `active` transmits.
pub fn sinr(instance: &NetworkInstance, user: usize, active: &ActivationSet) -> Result<f64> {
    check_member(instance, user, active)?;
    Ok(instance.links().sinr(user, active.members()))
}

/// Slots `user` needs to deliver one update while `active` transmits.
pub fn transmission_time(instance: &NetworkInstance, user: usize, active: &ActivationSet) -> Result<u32> {
    check_member(instance, user, active)?;
    Ok(instance.links().tau(user, active.members()))
}

/// Frame length: the slowest member's transmission time, or one idle slot.
pub fn frame_length(instance: &NetworkInstance, active: &ActivationSet) -> u32 {
    instance.links().frame_len(active.members())
}
