use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::network::AccessPoint;
use crate::error::{Error, Result};

/// Channel spacing and width of 2.4 GHz WiFi, in MHz.
const CHANNEL_SPACING_MHZ: f64 = 5.0;
const CHANNEL_WIDTH_MHZ: f64 = 22.0;

/// How AP channel assignments translate into pairwise overlap between users.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum OverlapModel {
    /// Overlap is the fraction of a 22 MHz channel shared by the two users'
    /// AP channels: 1 on the same channel, 0 for channels five or more apart
    /// (e.g. 1, 6, 11).
    Channels,
    /// Every pair of users on different APs overlaps by the same factor.
    Uniform { eta: f64 },
}

impl FromStr for OverlapModel {
    type Err = Error;

    /// Accepts `channels` or `uniform:<eta>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "channels" {
            return Ok(Self::Channels);
        }
        if let Some(v) = s.strip_prefix("uniform:") {
            let eta: f64 = v.parse().map_err(|_| Error::UnknownOverlapModel(s.to_string()))?;
            return Ok(Self::Uniform { eta });
        }
        Err(Error::UnknownOverlapModel(s.to_string()))
    }
}

/// Spectral overlap between two 2.4 GHz channel numbers.
pub fn channel_overlap(a: u32, b: u32) -> f64 {
    let sep = (a as f64 - b as f64).abs() * CHANNEL_SPACING_MHZ;
    (1.0 - sep / CHANNEL_WIDTH_MHZ).max(0.0)
}

/// Builds the user-pair overlap matrix. `ap_of[i]` is user i's AP. Pairs on
/// the same AP are never co-active and are stored as 0.
pub fn overlap_from_channels(
    aps: &[AccessPoint],
    ap_of: &[usize],
    model: &OverlapModel,
) -> Result<Vec<Vec<f64>>> {
    if let Some(&k) = ap_of.iter().find(|&&k| k >= aps.len()) {
        return Err(Error::UnknownAp(k));
    }
    if let OverlapModel::Uniform { eta } = model {
        if !(0.0..=1.0).contains(eta) {
            return Err(Error::InvalidInstance(format!("eta {eta} outside [0, 1]")));
        }
    }
    let n = ap_of.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (ki, kj) = (ap_of[i], ap_of[j]);
            if ki == kj {
                continue;
            }
            m[i][j] = match model {
                OverlapModel::Channels => channel_overlap(aps[ki].channel, aps[kj].channel),
                OverlapModel::Uniform { eta } => *eta,
            };
        }
    }
    Ok(m)
}
