use serde::{Deserialize, Serialize};

/// Per-user Age of Information in slots, plus the current slot counter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgeState {
    pub ages: Vec<u64>,
    pub now: u64,
}

impl AgeState {
    pub fn zeros(n: usize) -> Self {
        Self { ages: vec![0; n], now: 0 }
    }

    pub fn from_ages(ages: Vec<u64>) -> Self {
        Self { ages, now: 0 }
    }

    pub fn len(&self) -> usize {
        self.ages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ages.is_empty()
    }

    /// Quadratic Lyapunov function `sum_i w_i A_i^2`.
    pub fn lyapunov(&self, weights: &[f64]) -> f64 {
        self.ages.iter().zip(weights).map(|(&a, &w)| w * (a as f64) * (a as f64)).sum()
    }
}
