//! Random network layouts: two APs sharing a channel, or a hexagonal grid
//! with three-channel reuse.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{closest_ap, AccessPoint, NetworkInstance, OverlapModel, PhysicsParams, Position};
use crate::rng::{stream, SimRng, Stream};

pub const TWO_AP_PATHLOSS: f64 = 3.5;
pub const HEX_PATHLOSS: f64 = 2.5;
pub const REUSE_CHANNELS: [u32; 3] = [1, 6, 11];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoApParams {
    #[serde(default = "two_ap_separation")]
    pub separation_m: f64,
    #[serde(default = "two_ap_radius")]
    pub user_radius_m: f64,
    #[serde(default = "default_users")]
    pub users_per_ap: usize,
    #[serde(default)]
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HexParams {
    #[serde(default = "hex_radius")]
    pub cell_radius_m: f64,
    #[serde(default = "hex_aps")]
    pub num_aps: usize,
    #[serde(default = "default_users")]
    pub users_per_cell: usize,
    #[serde(default = "reuse_channels")]
    pub channels: Vec<u32>,
}

fn two_ap_separation() -> f64 {
    15.0
}
fn two_ap_radius() -> f64 {
    15.0
}
fn hex_radius() -> f64 {
    7.0
}
fn hex_aps() -> usize {
    9
}
fn default_users() -> usize {
    5
}
fn reuse_channels() -> Vec<u32> {
    REUSE_CHANNELS.to_vec()
}

impl Default for TwoApParams {
    fn default() -> Self {
        Self { separation_m: 15.0, user_radius_m: 15.0, users_per_ap: 5, eta: 0.0 }
    }
}

impl Default for HexParams {
    fn default() -> Self {
        Self { cell_radius_m: 7.0, num_aps: 9, users_per_cell: 5, channels: reuse_channels() }
    }
}

/// Uniform point in a disc; radius from `R sqrt(u)` with `u` in (0, 1] so
/// the point never sits on the center.
fn in_disc(rng: &mut SimRng, center: Position, radius: f64) -> Position {
    let r = radius * (1.0 - rng.gen::<f64>()).sqrt();
    let th = rng.gen::<f64>() * TAU;
    Position::new(center.x + r * th.cos(), center.y + r * th.sin())
}

/// Two co-channel APs on the x axis. Users are uniform in a disc around
/// their AP; a draw that lands nearer the other AP is mirrored across the
/// perpendicular bisector, which keeps it in the disc and keeps the split even.
pub fn gen_two_ap(p: &TwoApParams, physics: PhysicsParams, seed: u64) -> Result<NetworkInstance> {
    if !(0.0..=1.0).contains(&p.eta) {
        return Err(Error::InvalidScenario(format!("eta {} outside [0, 1]", p.eta)));
    }
    if p.users_per_ap == 0 || p.separation_m <= 0.0 || p.user_radius_m <= 0.0 {
        return Err(Error::InvalidScenario("two-AP layout needs users and positive distances".into()));
    }
    let aps: Vec<AccessPoint> = [0.0, p.separation_m]
        .iter()
        .enumerate()
        .map(|(id, &x)| AccessPoint { id, position: Position::new(x, 0.0), channel: REUSE_CHANNELS[0] })
        .collect();
    let mid = p.separation_m / 2.0;
    let mut rng = stream(seed, Stream::Layout);
    let mut pos = Vec::with_capacity(2 * p.users_per_ap);
    for ap in &aps {
        for _ in 0..p.users_per_ap {
            let q = loop {
                let mut q = in_disc(&mut rng, ap.position, p.user_radius_m);
                if closest_ap(&aps, &q) != Some(ap.id) {
                    q.x = 2.0 * mid - q.x;
                }
                if closest_ap(&aps, &q) == Some(ap.id) {
                    break q;
                }
            };
            pos.push(q);
        }
    }
    let w = vec![1.0; pos.len()];
    NetworkInstance::from_positions(aps, &pos, &w, physics, &OverlapModel::Uniform { eta: p.eta })
}

/// Axial coordinates of the supported grids: a triangle of three mutually
/// adjacent cells, or rows of three with every other row shifted.
fn hex_cells(k: usize) -> Result<Vec<(i32, i32)>> {
    match k {
        3 => Ok(vec![(0, 0), (1, 0), (0, 1)]),
        6 | 9 => Ok((0..(k / 3) as i32).flat_map(|r| (0..3).map(move |c| (c - r.div_euclid(2), r))).collect()),
        _ => Err(Error::UnsupportedLayout(format!("hexagonal grid with {k} APs (supported: 3, 6, 9)"))),
    }
}

fn hex_center(q: i32, r: i32, radius: f64) -> Position {
    let s3 = 3f64.sqrt();
    Position::new(s3 * radius * (q as f64 + r as f64 / 2.0), 1.5 * radius * r as f64)
}

/// Uniform point in a pointy-top hexagon: one of its six equilateral
/// triangles, then a uniform point in that triangle.
fn in_hexagon(rng: &mut SimRng, center: Position, radius: f64) -> Position {
    let k = rng.gen_range(0..6) as f64;
    let a0 = FRAC_PI_6 + k * FRAC_PI_3;
    let a1 = a0 + FRAC_PI_3;
    let (mut s, mut t) = (rng.gen::<f64>(), rng.gen::<f64>());
    if s + t > 1.0 {
        s = 1.0 - s;
        t = 1.0 - t;
    }
    Position::new(
        center.x + radius * (s * a0.cos() + t * a1.cos()),
        center.y + radius * (s * a0.sin() + t * a1.sin()),
    )
}

/// Hexagonal grid with channels assigned by `(q - r) mod 3`, which gives
/// neighbouring cells different channels.
pub fn gen_hex(p: &HexParams, physics: PhysicsParams, seed: u64) -> Result<NetworkInstance> {
    if p.channels.len() != 3 {
        return Err(Error::InvalidScenario("hexagonal reuse needs exactly three channels".into()));
    }
    if p.users_per_cell == 0 || p.cell_radius_m <= 0.0 {
        return Err(Error::InvalidScenario("hexagonal layout needs users and a positive radius".into()));
    }
    let cells = hex_cells(p.num_aps)?;
    let aps: Vec<AccessPoint> = cells
        .iter()
        .enumerate()
        .map(|(id, &(q, r))| AccessPoint {
            id,
            position: hex_center(q, r, p.cell_radius_m),
            channel: p.channels[(q - r).rem_euclid(3) as usize],
        })
        .collect();
    let mut rng = stream(seed, Stream::Layout);
    let mut pos = Vec::with_capacity(p.num_aps * p.users_per_cell);
    for ap in &aps {
        for _ in 0..p.users_per_cell {
            let q = loop {
                let q = in_hexagon(&mut rng, ap.position, p.cell_radius_m);
                if q.distance(&ap.position) > 0.0 && closest_ap(&aps, &q) == Some(ap.id) {
                    break q;
                }
            };
            pos.push(q);
        }
    }
    let w = vec![1.0; pos.len()];
    NetworkInstance::from_positions(aps, &pos, &w, physics, &OverlapModel::Channels)
}

/// Pairs of APs whose cells share an edge.
pub fn hex_adjacent(instance: &NetworkInstance, cell_radius_m: f64) -> Vec<(usize, usize)> {
    let aps = instance.aps();
    let edge = 3f64.sqrt() * cell_radius_m;
    let mut out = Vec::new();
    for i in 0..aps.len() {
        for j in i + 1..aps.len() {
            if (aps[i].position.distance(&aps[j].position) - edge).abs() < 1e-6 * edge {
                out.push((i, j));
            }
        }
    }
    out
}
