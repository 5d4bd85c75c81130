use std::hint::black_box;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::model::NetworkInstance;
use crate::policy::{AgeState, Policy};
use crate::rng::{stream, Stream};

pub const WARMUP_CALLS: usize = 10;
pub const MAX_BENCH_AGE: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecisionTiming {
    pub states: usize,
    pub mean_us: f64,
    pub median_us: f64,
    pub max_us: f64,
}

/// Random age vectors, each age uniform in `0..=200`.
pub fn bench_states(num_users: usize, count: usize, seed: u64) -> Vec<AgeState> {
    let mut rng = stream(seed, Stream::BenchStates);
    (0..count)
        .map(|_| AgeState::from_ages((0..num_users).map(|_| rng.gen_range(0..=MAX_BENCH_AGE)).collect()))
        .collect()
}

/// Wall-clock time of one `select` call over `num_states` random age states,
/// after ten discarded warm-up calls.
pub fn bench_decision_time(
    instance: &NetworkInstance,
    policy: &dyn Policy,
    num_states: usize,
    seed: u64,
) -> DecisionTiming {
    let states = bench_states(instance.num_users(), num_states.max(1), seed);
    let mut rng = stream(seed, Stream::Auxiliary);
    for i in 0..WARMUP_CALLS {
        black_box(policy.select(instance, &states[i % states.len()], &mut rng));
    }
    let mut us: Vec<f64> = states
        .iter()
        .map(|s| {
            let t = Instant::now();
            black_box(policy.select(instance, black_box(s), &mut rng));
            t.elapsed().as_secs_f64() * 1e6
        })
        .take(num_states)
        .collect();
    if us.is_empty() {
        return DecisionTiming { states: 0, mean_us: 0.0, median_us: 0.0, max_us: 0.0 };
    }
    us.sort_by(f64::total_cmp);
    let n = us.len();
    let median_us = if n % 2 == 1 { us[n / 2] } else { 0.5 * (us[n / 2 - 1] + us[n / 2]) };
    DecisionTiming { states: n, mean_us: us.iter().sum::<f64>() / n as f64, median_us, max_us: us[n - 1] }
}
