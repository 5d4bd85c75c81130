//! Scenario files: a layout, radio overrides, the policies to run, seeds and
//! an optional parameter sweep.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::layouts::{gen_hex, gen_two_ap, HexParams, TwoApParams, HEX_PATHLOSS, TWO_AP_PATHLOSS};
use crate::error::{Error, Result};
use crate::model::{dbm_per_hz_to_watts, NetworkInstance, PhysicsParams};
use crate::policy::DEFAULT_EPSILON;
use crate::sim::DEFAULT_HORIZON;

/// Largest K for which exhaustive MW runs without `force_mw`.
pub const MW_DEFAULT_MAX_APS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LayoutSpec {
    TwoAp(TwoApParams),
    Hex(HexParams),
}

impl LayoutSpec {
    pub fn num_aps(&self) -> usize {
        match self {
            Self::TwoAp(_) => 2,
            Self::Hex(h) => h.num_aps,
        }
    }

    pub fn num_users(&self) -> usize {
        match self {
            Self::TwoAp(p) => 2 * p.users_per_ap,
            Self::Hex(h) => h.num_aps * h.users_per_cell,
        }
    }

    /// Uniform overlap factor; hexagonal layouts derive overlap from channels.
    pub fn eta(&self) -> Option<f64> {
        match self {
            Self::TwoAp(p) => Some(p.eta),
            Self::Hex(_) => None,
        }
    }

    fn default_pathloss(&self) -> f64 {
        match self {
            Self::TwoAp(_) => TWO_AP_PATHLOSS,
            Self::Hex(_) => HEX_PATHLOSS,
        }
    }

    pub fn generate(&self, physics: PhysicsParams, seed: u64) -> Result<NetworkInstance> {
        match self {
            Self::TwoAp(p) => gen_two_ap(p, physics, seed),
            Self::Hex(h) => gen_hex(h, physics, seed),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::TwoAp(p) if !(0.0..=1.0).contains(&p.eta) => {
                Err(Error::InvalidScenario(format!("eta {} outside [0, 1]", p.eta)))
            }
            Self::Hex(h) if !matches!(h.num_aps, 3 | 6 | 9) => Err(Error::UnsupportedLayout(format!(
                "hexagonal grid with {} APs (supported: 3, 6, 9)",
                h.num_aps
            ))),
            _ => Ok(()),
        }
    }
}

/// Radio parameters that differ from the defaults. The path-loss exponent
/// falls back to 3.5 for two-AP layouts and 2.5 for hexagonal ones.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsOverrides {
    pub tx_power_watts: Option<f64>,
    pub pathloss_exponent: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub noise_dbm_per_hz: Option<f64>,
    pub update_size_bits: Option<u64>,
    pub slot_seconds: Option<f64>,
}

impl PhysicsOverrides {
    pub fn resolve(&self, layout: &LayoutSpec) -> Result<PhysicsParams> {
        let d = PhysicsParams::default();
        let p = PhysicsParams {
            tx_power_watts: self.tx_power_watts.unwrap_or(d.tx_power_watts),
            pathloss_exponent: self.pathloss_exponent.unwrap_or(layout.default_pathloss()),
            bandwidth_hz: self.bandwidth_hz.unwrap_or(d.bandwidth_hz),
            noise_density_w_per_hz: self.noise_dbm_per_hz.map_or(d.noise_density_w_per_hz, dbm_per_hz_to_watts),
            update_size_bits: self.update_size_bits.unwrap_or(d.update_size_bits),
            slot_seconds: self.slot_seconds.unwrap_or(d.slot_seconds),
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicySpec {
    /// Distributed per-AP max-weight, each AP on its own clock.
    Baseline,
    Srp,
    Mw,
    Amw,
}

impl PolicySpec {
    pub const ALL: [PolicySpec; 4] = [Self::Baseline, Self::Srp, Self::Mw, Self::Amw];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Baseline => "baseline",
            Self::Srp => "srp",
            Self::Mw => "mw",
            Self::Amw => "amw",
        }
    }
}

impl std::str::FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown policy `{s}`")))
    }
}

/// Values to sweep; the points are the cartesian product of the non-empty
/// lists, with unset axes taken from the base layout. `users_per_ap` means
/// users per cell for hexagonal layouts.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub eta: Vec<f64>,
    #[serde(default)]
    pub users_per_ap: Vec<usize>,
    #[serde(default)]
    pub num_aps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_id")]
    pub id: String,
    pub layout: LayoutSpec,
    #[serde(default)]
    pub physics: PhysicsOverrides,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicySpec>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_horizon")]
    pub horizon_slots: u64,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Run exhaustive MW even above `MW_DEFAULT_MAX_APS` APs.
    #[serde(default)]
    pub force_mw: bool,
}

fn default_id() -> String {
    "scenario".into()
}
fn default_policies() -> Vec<PolicySpec> {
    PolicySpec::ALL.to_vec()
}
fn default_seeds() -> Vec<u64> {
    (1..=10).collect()
}
fn default_horizon() -> u64 {
    DEFAULT_HORIZON
}
fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl Scenario {
    pub fn new(id: impl Into<String>, layout: LayoutSpec) -> Self {
        Self {
            id: id.into(),
            layout,
            physics: PhysicsOverrides::default(),
            policies: default_policies(),
            seeds: default_seeds(),
            horizon_slots: DEFAULT_HORIZON,
            sweep: SweepSpec::default(),
            epsilon: DEFAULT_EPSILON,
            force_mw: false,
        }
    }

    /// Two APs, ten evenly spaced overlap factors in [0, 0.5], N in {10, 20}.
    pub fn eta_sweep() -> Self {
        let mut s = Self::new("sweep-eta", LayoutSpec::TwoAp(TwoApParams::default()));
        s.sweep.eta = (0..10).map(|i| 0.5 * i as f64 / 9.0).collect();
        s.sweep.users_per_ap = vec![5, 10];
        s
    }

    /// Hexagonal grids of 3, 6 and 9 cells with five users each.
    pub fn k_sweep() -> Self {
        let mut s = Self::new("sweep-k", LayoutSpec::Hex(HexParams::default()));
        s.sweep.num_aps = vec![3, 6, 9];
        s
    }

    /// Parses and validates; JSON errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidScenario(m.into()));
        if self.policies.is_empty() {
            return bad("policy list is empty");
        }
        if self.seeds.is_empty() {
            return bad("seed list is empty");
        }
        if self.horizon_slots == 0 {
            return bad("horizon must be at least one slot");
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if matches!(self.layout, LayoutSpec::Hex(_)) && !self.sweep.eta.is_empty() {
            return bad("an eta sweep needs a two_ap layout");
        }
        if matches!(self.layout, LayoutSpec::TwoAp(_)) && !self.sweep.num_aps.is_empty() {
            return bad("a num_aps sweep needs a hex layout");
        }
        for p in self.points() {
            p.validate()?;
            self.physics.resolve(&p)?;
        }
        Ok(())
    }

    /// Concrete layouts in sweep order: AP count, then users, then eta.
    pub fn points(&self) -> Vec<LayoutSpec> {
        fn axis<T: Copy>(v: &[T], base: T) -> Vec<T> {
            if v.is_empty() {
                vec![base]
            } else {
                v.to_vec()
            }
        }
        let mut out = Vec::new();
        match &self.layout {
            LayoutSpec::TwoAp(base) => {
                for users in axis(&self.sweep.users_per_ap, base.users_per_ap) {
                    for eta in axis(&self.sweep.eta, base.eta) {
                        out.push(LayoutSpec::TwoAp(TwoApParams { users_per_ap: users, eta, ..base.clone() }));
                    }
                }
            }
            LayoutSpec::Hex(base) => {
                for k in axis(&self.sweep.num_aps, base.num_aps) {
                    for users in axis(&self.sweep.users_per_ap, base.users_per_cell) {
                        out.push(LayoutSpec::Hex(HexParams { num_aps: k, users_per_cell: users, ..base.clone() }));
                    }
                }
            }
        }
        out
    }

    /// Whether `policy` runs at `point`; MW is skipped on large grids unless
    /// forced.
    pub fn runs(&self, policy: PolicySpec, point: &LayoutSpec) -> bool {
        policy != PolicySpec::Mw || self.force_mw || point.num_aps() <= MW_DEFAULT_MAX_APS
    }
}
