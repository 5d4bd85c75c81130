use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One delivered update. The user's age at slot `completion` is `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delivery {
    pub start: u64,
    pub completion: u64,
    pub value: u64,
}

/// A scheduling decision and how it played out. In asynchronous mode every
/// per-AP transmission is its own record with `ap` set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub start: u64,
    pub members: Vec<usize>,
    pub len: u32,
    pub decision_seconds: f64,
    /// False when the frame runs past the horizon.
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ap: Option<usize>,
}

/// Waiting times, service times and the residual after the last delivery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliverySamples {
    pub initial_age: u64,
    pub waiting: Vec<u64>,
    pub service: Vec<u64>,
    pub residual: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTrace {
    pub horizon: u64,
    pub weights: Vec<f64>,
    pub initial_ages: Vec<u64>,
    /// `sum_t A_i(t)` over slots `0..horizon`.
    pub age_sums: Vec<u64>,
    /// `sum_i w_i A_i(t)` for each slot.
    pub weighted_age: Vec<f64>,
    pub deliveries: Vec<Vec<Delivery>>,
    pub frames: Vec<FrameRecord>,
    /// Full age matrix `ages[t][i]`, only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ages: Option<Vec<Vec<u64>>>,
}

impl SimTrace {
    pub(crate) fn new(horizon: u64, weights: &[f64], initial_ages: Vec<u64>, keep_ages: bool) -> Self {
        let n = weights.len();
        Self {
            horizon,
            weights: weights.to_vec(),
            initial_ages,
            age_sums: vec![0; n],
            weighted_age: Vec::with_capacity(horizon as usize),
            deliveries: vec![Vec::new(); n],
            frames: Vec::new(),
            ages: keep_ages.then(Vec::new),
        }
    }

    pub(crate) fn record_slot(&mut self, ages: &[u64]) {
        let mut s = 0.0;
        for (i, &a) in ages.iter().enumerate() {
            self.age_sums[i] += a;
            s += self.weights[i] * a as f64;
        }
        self.weighted_age.push(s);
        if let Some(m) = &mut self.ages {
            m.push(ages.to_vec());
        }
    }

    pub fn num_users(&self) -> usize {
        self.weights.len()
    }

    /// `(1 / (N T)) sum_t sum_i w_i A_i(t)`, in slots.
    pub fn weighted_average_aoi(&self) -> f64 {
        let n = self.num_users() as f64;
        let t = self.horizon as f64;
        self.age_sums.iter().zip(&self.weights).map(|(&s, &w)| w * s as f64).sum::<f64>() / (n * t)
    }

    pub fn user_average_aoi(&self, user: usize) -> f64 {
        self.age_sums[user] as f64 / self.horizon as f64
    }

    pub fn num_deliveries(&self) -> usize {
        self.deliveries.iter().map(Vec::len).sum()
    }

    pub fn samples(&self, user: usize) -> DeliverySamples {
        let mut prev = 0;
        let mut waiting = Vec::new();
        let mut service = Vec::new();
        for d in &self.deliveries[user] {
            waiting.push(d.start - prev);
            service.push(d.completion - d.start);
            prev = d.completion;
        }
        DeliverySamples { initial_age: self.initial_ages[user], waiting, service, residual: self.horizon - prev }
    }

    pub fn complete_frames(&self) -> impl Iterator<Item = &FrameRecord> {
        self.frames.iter().filter(|f| f.complete)
    }

    pub fn mean_decision_seconds(&self) -> f64 {
        if self.frames.is_empty() {
            return 0.0;
        }
        self.frames.iter().map(|f| f.decision_seconds).sum::<f64>() / self.frames.len() as f64
    }

    /// Writes one JSON frame record per line.
    pub fn write_frames_jsonl(&self, mut out: impl Write) -> Result<()> {
        for f in &self.frames {
            serde_json::to_writer(&mut out, f)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Free-function form of [`SimTrace::weighted_average_aoi`] for arbitrary
/// weights over the same trajectory.
pub fn weighted_average_aoi(trace: &SimTrace, weights: &[f64]) -> f64 {
    let n = weights.len() as f64;
    trace.age_sums.iter().zip(weights).map(|(&s, &w)| w * s as f64).sum::<f64>() / (n * trace.horizon as f64)
}
