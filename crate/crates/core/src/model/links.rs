use super::network::{AccessPoint, UserNode};
use super::physics::PhysicsParams;
use crate::error::{Error, Result};

/// Precomputed received powers for every (victim, interferer) pair.
///
/// `cross[v * n + j]` is the power from user `j` landing at the AP of user
/// `v`, already scaled by the spectral overlap. Interference sums are always
/// accumulated over members in ascending id order starting from zero, so any
/// two code paths that evaluate the same set get bit-identical SINRs.
#[derive(Debug, Clone)]
pub struct LinkModel {
    physics: PhysicsParams,
    noise: f64,
    n: usize,
    signal: Vec<f64>,
    cross: Vec<f64>,
    ap_of: Vec<usize>,
    cells: Vec<Vec<usize>>,
    weights: Vec<f64>,
    solo_tau: Vec<u32>,
    /// `pair_len[a * n + b]`: frame length of `{a, b}` for users on
    /// different APs. Only kept for `n <= PAIR_TABLE_MAX_USERS`.
    pair_len: Vec<u32>,
}

/// Above this many users the pairwise frame-length table is not built.
pub const PAIR_TABLE_MAX_USERS: usize = 2048;

impl LinkModel {
    pub(crate) fn build(
        aps: &[AccessPoint],
        users: &[UserNode],
        physics: &PhysicsParams,
        overlap: &[Vec<f64>],
    ) -> Result<Self> {
        let n = users.len();
        let ap_of: Vec<usize> = users.iter().map(|u| u.ap_id).collect();
        let mut cells = vec![Vec::new(); aps.len()];
        for u in users {
            cells[u.ap_id].push(u.id);
        }

        let mut signal = Vec::with_capacity(n);
        for u in users {
            let d = u.position.distance(&aps[u.ap_id].position);
            if d <= 0.0 {
                return Err(Error::DegenerateGeometry { user: u.id, ap: u.ap_id });
            }
            signal.push(physics.received_power(d));
        }

        let mut cross = vec![0.0; n * n];
        for v in 0..n {
            let ap = &aps[ap_of[v]];
            for j in 0..n {
                let eta = overlap[v][j];
                if j == v || ap_of[j] == ap_of[v] || eta == 0.0 {
                    continue;
                }
                let d = users[j].position.distance(&ap.position);
                if d <= 0.0 {
                    return Err(Error::DegenerateGeometry { user: j, ap: ap.id });
                }
                cross[v * n + j] = eta * physics.received_power(d);
            }
        }

        let noise = physics.noise_power();
        let weights = users.iter().map(|u| u.weight).collect();
        let mut model = Self {
            physics: *physics,
            noise,
            n,
            signal,
            cross,
            ap_of,
            cells,
            weights,
            solo_tau: Vec::new(),
            pair_len: Vec::new(),
        };
        model.solo_tau = (0..n).map(|v| model.tau_with(v, 0.0)).collect();
        if n <= PAIR_TABLE_MAX_USERS {
            let mut pair = vec![0; n * n];
            for a in 0..n {
                for b in a + 1..n {
                    if model.ap_of[a] != model.ap_of[b] {
                        let len = model.frame_len(&[a, b]);
                        pair[a * n + b] = len;
                        pair[b * n + a] = len;
                    }
                }
            }
            model.pair_len = pair;
        }
        Ok(model)
    }

    pub fn physics(&self) -> &PhysicsParams {
        &self.physics
    }

    pub fn num_users(&self) -> usize {
        self.n
    }

    pub fn ap_of(&self, user: usize) -> usize {
        self.ap_of[user]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Interference-free transmission time of each user.
    pub fn solo_tau(&self) -> &[u32] {
        &self.solo_tau
    }

    /// Frame length of `{a, b}` when the pair table exists. Any feasible set
    /// containing both runs at least this long.
    #[inline]
    pub fn pair_len(&self, a: usize, b: usize) -> Option<u32> {
        self.pair_len.get(a * self.n + b).copied()
    }

    /// Overlap-scaled power of `interferer` at the AP of `victim`.
    #[inline]
    pub fn gain(&self, victim: usize, interferer: usize) -> f64 {
        self.cross[victim * self.n + interferer]
    }

    /// Sum of interference at `victim`'s AP from `members` (sorted ascending).
    #[inline]
    pub fn interference(&self, victim: usize, members: &[usize]) -> f64 {
        let row = &self.cross[victim * self.n..(victim + 1) * self.n];
        let mut acc = 0.0;
        for &j in members {
            if j != victim {
                acc += row[j];
            }
        }
        acc
    }

    #[inline]
    pub fn sinr_with(&self, victim: usize, interference: f64) -> f64 {
        self.signal[victim] / (self.noise + interference)
    }

    #[inline]
    pub fn tau_with(&self, victim: usize, interference: f64) -> u32 {
        self.physics.update_slots(self.sinr_with(victim, interference))
    }

    pub fn sinr(&self, victim: usize, members: &[usize]) -> f64 {
        self.sinr_with(victim, self.interference(victim, members))
    }

    pub fn tau(&self, victim: usize, members: &[usize]) -> u32 {
        self.tau_with(victim, self.interference(victim, members))
    }

    /// Per-member transmission times (aligned with `members`) and the frame
    /// length. The empty set is a one-slot idle frame.
    pub fn frame(&self, members: &[usize]) -> (Vec<u32>, u32) {
        let taus: Vec<u32> = members.iter().map(|&v| self.tau(v, members)).collect();
        let len = taus.iter().copied().max().unwrap_or(1);
        (taus, len)
    }

    /// Frame length alone; same value as `frame(members).1`.
    ///
    /// Transmission time is non-increasing in SINR, so the slowest member is
    /// the one with the lowest SINR and only one logarithm is needed.
    pub fn frame_len(&self, members: &[usize]) -> u32 {
        let worst = members
            .iter()
            .map(|&v| self.sinr(v, members))
            .fold(f64::INFINITY, f64::min);
        if members.is_empty() {
            1
        } else {
            self.physics.update_slots(worst)
        }
    }
}
