use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::trace::{Delivery, FrameRecord, SimTrace};
use crate::model::NetworkInstance;
use crate::policy::{best_in_cell, AgeState, Policy};
use crate::rng::{stream, Stream};

/// When a scheduled user's age drops back.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResetMode {
    /// At its own completion, to its own transmission time.
    #[default]
    AtCompletion,
    /// At the end of the frame, to the frame length.
    FrameEnd,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(default = "default_horizon")]
    pub horizon_slots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub reset: ResetMode,
    /// Keep the full per-slot age matrix in the trace.
    #[serde(default)]
    pub keep_ages: bool,
}

pub const DEFAULT_HORIZON: u64 = 10_000;

fn default_horizon() -> u64 {
    DEFAULT_HORIZON
}

impl SimConfig {
    pub fn new(horizon_slots: u64, seed: u64) -> Self {
        Self { horizon_slots, seed, reset: ResetMode::AtCompletion, keep_ages: false }
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self::new(DEFAULT_HORIZON, 0)
    }
}

/// Frame-by-frame simulation with a central controller: `policy` picks a set
/// at each frame start and nothing new starts until its slowest member is
/// done.
pub fn run_frame_synchronous(instance: &NetworkInstance, policy: &dyn Policy, config: &SimConfig) -> SimTrace {
    assert!(config.horizon_slots >= 1, "horizon must be at least one slot");
    let n = instance.num_users();
    let horizon = config.horizon_slots;
    let mut trace = SimTrace::new(horizon, instance.weights(), vec![0; n], config.keep_ages);
    let mut rng = stream(config.seed, Stream::Schedule);
    let mut state = AgeState::zeros(n);
    // (slot, user, value) resets still pending inside the current frame
    let mut pending: Vec<(u64, usize, u64)> = Vec::new();

    let mut t = 0;
    while t < horizon {
        state.now = t;
        let clock = Instant::now();
        let d = policy.select(instance, &state, &mut rng);
        let decision_seconds = clock.elapsed().as_secs_f64();

        let frame_end = t + d.frame_len as u64;
        pending.clear();
        for (&u, &tau) in d.set.members().iter().zip(&d.per_user_tau) {
            let (at, value) = match config.reset {
                ResetMode::AtCompletion => (t + tau as u64, tau as u64),
                ResetMode::FrameEnd => (frame_end, d.frame_len as u64),
            };
            pending.push((at, u, value));
            if at <= horizon {
                trace.deliveries[u].push(Delivery { start: t, completion: at, value });
            }
        }
        trace.frames.push(FrameRecord {
            start: t,
            members: d.set.members().to_vec(),
            len: d.frame_len,
            decision_seconds,
            complete: frame_end <= horizon,
            ap: None,
        });

        let stop = frame_end.min(horizon);
        while t < stop {
            trace.record_slot(&state.ages);
            t += 1;
            state.ages.iter_mut().for_each(|a| *a += 1);
            for &(at, u, value) in &pending {
                if at == t {
                    state.ages[u] = value;
                }
            }
        }
    }
    trace
}

struct Transmission {
    user: usize,
    start: u64,
    frame: usize,
    remaining_bits: f64,
    segment_start: u64,
    sinr: f64,
    completion: u64,
}

/// Every AP runs its single-cell rule on its own clock. An AP picks its next
/// user as soon as it is idle; ongoing transmissions drain their remaining
/// bits at whatever rate the current mix of transmitters allows.
pub fn run_asynchronous_baseline(instance: &NetworkInstance, config: &SimConfig) -> SimTrace {
    assert!(config.horizon_slots >= 1, "horizon must be at least one slot");
    let links = instance.links();
    let physics = links.physics();
    let n = instance.num_users();
    let k = instance.num_aps();
    let horizon = config.horizon_slots;
    let update_bits = physics.update_size_bits as f64;
    let mut trace = SimTrace::new(horizon, instance.weights(), vec![0; n], config.keep_ages);
    let mut ages = vec![0u64; n];
    let mut tx: Vec<Option<Transmission>> = (0..k).map(|_| None).collect();
    let mut members: Vec<usize> = Vec::with_capacity(k);

    for t in 0..horizon {
        let mut changed = false;
        for slot in tx.iter_mut() {
            if let Some(x) = slot.as_ref().filter(|x| x.completion == t) {
                let value = t - x.start;
                ages[x.user] = value;
                trace.deliveries[x.user].push(Delivery { start: x.start, completion: t, value });
                trace.frames[x.frame].len = value as u32;
                trace.frames[x.frame].complete = true;
                *slot = None;
                changed = true;
            }
        }

        trace.record_slot(&ages);

        for (ap, slot) in tx.iter_mut().enumerate() {
            if slot.is_some() {
                continue;
            }
            let clock = Instant::now();
            let choice = best_in_cell(links, &ages, &links.cells()[ap]);
            let decision_seconds = clock.elapsed().as_secs_f64();
            if let Some(user) = choice {
                trace.frames.push(FrameRecord {
                    start: t,
                    members: vec![user],
                    len: 0,
                    decision_seconds,
                    complete: false,
                    ap: Some(ap),
                });
                *slot = Some(Transmission {
                    user,
                    start: t,
                    frame: trace.frames.len() - 1,
                    remaining_bits: update_bits,
                    segment_start: t,
                    sinr: 0.0,
                    completion: 0,
                });
                changed = true;
            }
        }

        if changed {
            members.clear();
            members.extend(tx.iter().flatten().map(|x| x.user));
            members.sort_unstable();
            for x in tx.iter_mut().flatten() {
                if x.segment_start < t {
                    x.remaining_bits -= (t - x.segment_start) as f64 * physics.bits_per_slot(x.sinr);
                }
                x.segment_start = t;
                x.sinr = links.sinr(x.user, &members);
                x.completion = t + physics.slots_for_bits(x.remaining_bits, x.sinr) as u64;
            }
        }

        ages.iter_mut().for_each(|a| *a += 1);
    }

    for x in tx.into_iter().flatten() {
        if x.completion == horizon {
            let value = horizon - x.start;
            trace.deliveries[x.user].push(Delivery { start: x.start, completion: horizon, value });
            trace.frames[x.frame].len = value as u32;
            trace.frames[x.frame].complete = true;
        } else {
            // cut by the horizon: keep the elapsed length
            trace.frames[x.frame].len = (horizon - x.start) as u32;
        }
    }
    trace
}
