use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bits in the default 100 KB update (binary kilobytes).
pub const DEFAULT_UPDATE_BITS: u64 = 100 * 1024 * 8;

/// Radio and framing parameters shared by every node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    pub tx_power_watts: f64,
    pub pathloss_exponent: f64,
    pub bandwidth_hz: f64,
    pub noise_density_w_per_hz: f64,
    pub update_size_bits: u64,
    pub slot_seconds: f64,
}

impl Default for PhysicsParams {
    /// 10 mW over a 22 MHz channel, -174 dBm/Hz noise, path-loss exponent 2.5,
    /// 100 KB updates and 0.1 ms slots.
    fn default() -> Self {
        Self {
            tx_power_watts: 0.01,
            pathloss_exponent: 2.5,
            bandwidth_hz: 22e6,
            noise_density_w_per_hz: dbm_per_hz_to_watts(-174.0),
            update_size_bits: DEFAULT_UPDATE_BITS,
            slot_seconds: 1e-4,
        }
    }
}

/// Converts a noise density in dBm/Hz to W/Hz.
pub fn dbm_per_hz_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

impl PhysicsParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("tx_power_watts", self.tx_power_watts),
            ("pathloss_exponent", self.pathloss_exponent),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_density_w_per_hz", self.noise_density_w_per_hz),
            ("slot_seconds", self.slot_seconds),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidPhysics(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if self.update_size_bits == 0 {
            return Err(Error::InvalidPhysics("update_size_bits must be > 0".into()));
        }
        if !(self.noise_power() > 0.0) {
            return Err(Error::InvalidPhysics("noise power underflows to zero".into()));
        }
        Ok(())
    }

    /// Thermal noise power N0 * B in watts.
    pub fn noise_power(&self) -> f64 {
        self.noise_density_w_per_hz * self.bandwidth_hz
    }

    /// Received power at distance `d` meters under unit fading gain.
    pub fn received_power(&self, distance_m: f64) -> f64 {
        self.tx_power_watts * distance_m.powf(-self.pathloss_exponent)
    }

    /// Shannon rate in bits per second at the given linear SINR.
    pub fn rate_bps(&self, sinr: f64) -> f64 {
        self.bandwidth_hz * (1.0 + sinr).log2()
    }

    /// Transmission time in slots before rounding up.
    pub fn continuous_slots(&self, bits: f64, sinr: f64) -> f64 {
        (bits / self.slot_seconds) / self.rate_bps(sinr)
    }

    /// Whole slots needed to push `bits` through at a fixed SINR.
    ///
    /// Every slot-count in the crate goes through here so that equal inputs
    /// always round identically.
    pub fn slots_for_bits(&self, bits: f64, sinr: f64) -> u32 {
        let slots = self.continuous_slots(bits, sinr).ceil();
        if slots >= u32::MAX as f64 {
            u32::MAX
        } else {
            (slots as u32).max(1)
        }
    }

    /// Slots needed for one full update at a fixed SINR.
    pub fn update_slots(&self, sinr: f64) -> u32 {
        self.slots_for_bits(self.update_size_bits as f64, sinr)
    }

    /// Bits delivered in one slot at a fixed SINR.
    pub fn bits_per_slot(&self, sinr: f64) -> f64 {
        self.rate_bps(sinr) * self.slot_seconds
    }

    /// Converts a duration in slots to milliseconds.
    pub fn slots_to_ms(&self, slots: f64) -> f64 {
        slots * self.slot_seconds * 1e3
    }
}
