use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ActivationSet, LinkModel, NetworkInstance};

/// One frame's schedule: who transmits, how long each member needs, and the
/// frame length (the slowest member, or one idle slot).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyDecision {
    pub set: ActivationSet,
    pub frame_len: u32,
    /// Aligned with `set.members()`.
    pub per_user_tau: Vec<u32>,
}

impl PolicyDecision {
    pub fn idle() -> Self {
        Self { set: ActivationSet::empty(), frame_len: 1, per_user_tau: Vec::new() }
    }

    pub fn for_set(links: &LinkModel, set: ActivationSet) -> Self {
        let (per_user_tau, frame_len) = links.frame(set.members());
        Self { set, frame_len, per_user_tau }
    }

    pub fn tau_of(&self, user: usize) -> Option<u32> {
        self.set.members().binary_search(&user).ok().map(|p| self.per_user_tau[p])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub members: ActivationSet,
    pub prob: f64,
}

/// Probabilities over feasible sets for a stationary randomized policy. The
/// mass not assigned to any entry is the probability of idling for a slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ScheduleEntry>", into = "Vec<ScheduleEntry>")]
pub struct ScheduleDistribution {
    entries: Vec<ScheduleEntry>,
}

pub const MASS_TOLERANCE: f64 = 1e-9;

impl TryFrom<Vec<ScheduleEntry>> for ScheduleDistribution {
    type Error = Error;

    fn try_from(entries: Vec<ScheduleEntry>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDistribution(m));
        let mut seen = HashSet::new();
        let mut total = 0.0;
        for e in &entries {
            if !(e.prob.is_finite() && e.prob >= 0.0) {
                return bad(format!("probability {} of {:?} is not a finite non-negative number", e.prob, e.members));
            }
            if !seen.insert(e.members.clone()) {
                return bad(format!("set {:?} appears twice", e.members.members()));
            }
            total += e.prob;
        }
        if total > 1.0 + MASS_TOLERANCE {
            return bad(format!("probabilities sum to {total} > 1"));
        }
        Ok(Self { entries })
    }
}

impl From<ScheduleDistribution> for Vec<ScheduleEntry> {
    fn from(d: ScheduleDistribution) -> Self {
        d.entries
    }
}

impl ScheduleDistribution {
    /// Validates masses, duplicates and feasibility against `instance`.
    pub fn new(instance: &NetworkInstance, entries: Vec<ScheduleEntry>) -> Result<Self> {
        let d = Self::try_from(entries)?;
        d.check_feasible(instance)?;
        Ok(d)
    }

    pub fn check_feasible(&self, instance: &NetworkInstance) -> Result<()> {
        for e in &self.entries {
            if !e.members.is_feasible(instance) {
                return Err(Error::InvalidDistribution(format!(
                    "set {:?} is not feasible",
                    e.members.members()
                )));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.prob).sum()
    }

    /// Probability of the implicit idle draw.
    pub fn idle_mass(&self) -> f64 {
        (1.0 - self.total_mass()).max(0.0)
    }

    /// Total probability of the sets containing `user`.
    pub fn mass_on(&self, user: usize) -> f64 {
        self.entries.iter().filter(|e| e.members.contains(user)).map(|e| e.prob).sum()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<std::path::Path>, instance: &NetworkInstance) -> Result<Self> {
        let d = Self::from_json(&std::fs::read_to_string(path)?)?;
        d.check_feasible(instance)?;
        Ok(d)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
