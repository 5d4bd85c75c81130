//! Small hand-built instances shared by unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub fn single_user_at(distance: f64, physics: PhysicsParams) -> NetworkInstance {
    let aps = vec![AccessPoint { id: 0, position: Position::new(0.0, 0.0), channel: 1 }];
    NetworkInstance::from_positions(aps, &[Position::new(distance, 0.0)], &[1.0], physics, &OverlapModel::Channels)
        .unwrap()
}

/// APs every 20 m along the x axis; user `m` of cell `k` sits `5 + m` meters
/// from its AP, on the side facing the next AP for even `k` and the previous
/// one for odd `k`, so two cells of one user each are mirror images.
pub fn line_instance(cell_sizes: &[usize], eta: f64) -> NetworkInstance {
    let aps: Vec<_> = (0..cell_sizes.len())
        .map(|k| AccessPoint { id: k, position: Position::new(20.0 * k as f64, 0.0), channel: 1 })
        .collect();
    let mut pos = Vec::new();
    for (k, &size) in cell_sizes.iter().enumerate() {
        let dir = if k % 2 == 0 { 1.0 } else { -1.0 };
        for m in 0..size {
            pos.push(Position::new(20.0 * k as f64 + dir * (5.0 + m as f64), 0.5 * m as f64));
        }
    }
    let w = vec![1.0; pos.len()];
    NetworkInstance::from_positions(aps, &pos, &w, PhysicsParams::default(), &OverlapModel::Uniform { eta })
        .unwrap()
}

/// `k` co-channel APs in a row with `per_cell` users each.
pub fn grid_instance(k: usize, per_cell: usize) -> NetworkInstance {
    line_instance(&vec![per_cell; k], 1.0)
}

/// Random users within 8 m of APs spaced 15 m apart, uniform overlap `eta`.
pub fn random_instance(k: usize, per_cell: usize, eta: f64, seed: u64) -> NetworkInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let aps: Vec<_> = (0..k)
        .map(|id| AccessPoint { id, position: Position::new(15.0 * id as f64, 0.0), channel: 1 })
        .collect();
    let mut pos = Vec::new();
    for ap in &aps {
        for _ in 0..per_cell {
            loop {
                let r = 7.0 * rng.gen::<f64>().sqrt() + 0.5;
                let th = rng.gen::<f64>() * std::f64::consts::TAU;
                let p = Position::new(ap.position.x + r * th.cos(), r * th.sin());
                if closest_ap(&aps, &p) == Some(ap.id) {
                    pos.push(p);
                    break;
                }
            }
        }
    }
    let w = vec![1.0; pos.len()];
    NetworkInstance::from_positions(aps, &pos, &w, PhysicsParams::default(), &OverlapModel::Uniform { eta })
        .unwrap()
}

/// `k` APs 30 m apart, each with `per_cell` users on a circle of `radius`
/// meters around it, so every user has the same interference-free time.
pub fn ring_instance(k: usize, per_cell: usize, radius: f64, eta: f64) -> NetworkInstance {
    let aps: Vec<_> = (0..k)
        .map(|id| AccessPoint { id, position: Position::new(30.0 * id as f64, 0.0), channel: 1 })
        .collect();
    let mut pos = Vec::new();
    for ap in &aps {
        for m in 0..per_cell {
            let th = std::f64::consts::TAU * (m as f64 + 0.25) / per_cell as f64;
            pos.push(Position::new(ap.position.x + radius * th.cos(), radius * th.sin()));
        }
    }
    let w = vec![1.0; pos.len()];
    NetworkInstance::from_positions(aps, &pos, &w, PhysicsParams::default(), &OverlapModel::Uniform { eta })
        .unwrap()
}

/// Physics under which every update fits in one slot whatever the interference.
pub fn one_slot_physics() -> PhysicsParams {
    PhysicsParams { update_size_bits: 8, ..PhysicsParams::default() }
}
