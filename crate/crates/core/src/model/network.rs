use serde::{Deserialize, Serialize};

use super::links::LinkModel;
use super::physics::PhysicsParams;
use crate::error::{Error, Result};

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessPoint {
    pub id: usize,
    pub position: Position,
    pub channel: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserNode {
    pub id: usize,
    pub position: Position,
    pub ap_id: usize,
    pub weight: f64,
}

/// Index of the AP closest to `p`; equidistant APs resolve to the lowest id.
pub fn closest_ap(aps: &[AccessPoint], p: &Position) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for ap in aps {
        let d = ap.position.distance(p);
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((ap.id, d)),
        }
    }
    best.map(|(id, _)| id)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawInstance {
    aps: Vec<AccessPoint>,
    users: Vec<UserNode>,
    physics: PhysicsParams,
    overlap: Vec<Vec<f64>>,
}

/// The physical network: APs, users, radio parameters and pairwise spectral
/// overlap. Immutable once built; the derived [`LinkModel`] is computed at
/// construction so every later query is a table lookup.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct NetworkInstance {
    aps: Vec<AccessPoint>,
    users: Vec<UserNode>,
    physics: PhysicsParams,
    overlap: Vec<Vec<f64>>,
    links: LinkModel,
}

impl PartialEq for NetworkInstance {
    fn eq(&self, other: &Self) -> bool {
        self.aps == other.aps
            && self.users == other.users
            && self.physics == other.physics
            && self.overlap == other.overlap
    }
}

impl TryFrom<RawInstance> for NetworkInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        NetworkInstance::new(raw.aps, raw.users, raw.physics, raw.overlap)
    }
}

impl From<NetworkInstance> for RawInstance {
    fn from(n: NetworkInstance) -> Self {
        RawInstance { aps: n.aps, users: n.users, physics: n.physics, overlap: n.overlap }
    }
}

impl NetworkInstance {
    pub fn new(
        aps: Vec<AccessPoint>,
        users: Vec<UserNode>,
        physics: PhysicsParams,
        overlap: Vec<Vec<f64>>,
    ) -> Result<Self> {
        physics.validate()?;
        validate(&aps, &users, &overlap)?;
        let links = LinkModel::build(&aps, &users, &physics, &overlap)?;
        Ok(Self { aps, users, physics, overlap, links })
    }

    /// Builds an instance from raw user positions, associating each user with
    /// its closest AP. User ids follow the order of `positions`.
    pub fn from_positions(
        aps: Vec<AccessPoint>,
        positions: &[Position],
        weights: &[f64],
        physics: PhysicsParams,
        overlap: &super::overlap::OverlapModel,
    ) -> Result<Self> {
        if positions.len() != weights.len() {
            return Err(Error::InvalidInstance(format!(
                "{} positions but {} weights",
                positions.len(),
                weights.len()
            )));
        }
        let users = positions
            .iter()
            .zip(weights)
            .enumerate()
            .map(|(id, (p, &w))| {
                let ap_id = closest_ap(&aps, p)
                    .ok_or_else(|| Error::InvalidInstance("no access points".into()))?;
                Ok(UserNode { id, position: *p, ap_id, weight: w })
            })
            .collect::<Result<Vec<_>>>()?;
        let ap_of: Vec<usize> = users.iter().map(|u| u.ap_id).collect();
        let matrix = super::overlap::overlap_from_channels(&aps, &ap_of, overlap)?;
        Self::new(aps, users, physics, matrix)
    }

    pub fn aps(&self) -> &[AccessPoint] {
        &self.aps
    }

    pub fn users(&self) -> &[UserNode] {
        &self.users
    }

    pub fn physics(&self) -> &PhysicsParams {
        &self.physics
    }

    pub fn overlap(&self) -> &[Vec<f64>] {
        &self.overlap
    }

    pub fn links(&self) -> &LinkModel {
        &self.links
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_aps(&self) -> usize {
        self.aps.len()
    }

    pub fn weights(&self) -> &[f64] {
        self.links.weights()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights().iter().sum()
    }

    /// Users served by `ap`, ascending by id.
    pub fn cell(&self, ap: usize) -> Result<&[usize]> {
        self.links.cells().get(ap).map(Vec::as_slice).ok_or(Error::UnknownAp(ap))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Same geometry with every weight multiplied by `factor`.
    pub fn with_scaled_weights(&self, factor: f64) -> Result<Self> {
        let users = self
            .users
            .iter()
            .map(|u| UserNode { weight: u.weight * factor, ..u.clone() })
            .collect();
        Self::new(self.aps.clone(), users, self.physics, self.overlap.clone())
    }

    /// Same geometry under different radio parameters.
    pub fn with_physics(&self, physics: PhysicsParams) -> Result<Self> {
        Self::new(self.aps.clone(), self.users.clone(), physics, self.overlap.clone())
    }
}

fn validate(aps: &[AccessPoint], users: &[UserNode], overlap: &[Vec<f64>]) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidInstance(msg));
    if aps.is_empty() {
        return bad("at least one access point is required".into());
    }
    if users.is_empty() {
        return bad("at least one user is required".into());
    }
    for (k, ap) in aps.iter().enumerate() {
        if ap.id != k {
            return bad(format!("AP ids must be contiguous from 0; position {k} has id {}", ap.id));
        }
        if !ap.position.is_finite() {
            return bad(format!("AP {k} has a non-finite position"));
        }
    }
    for (i, u) in users.iter().enumerate() {
        if u.id != i {
            return bad(format!("user ids must be contiguous from 0; position {i} has id {}", u.id));
        }
        if !u.position.is_finite() {
            return bad(format!("user {i} has a non-finite position"));
        }
        if !(u.weight.is_finite() && u.weight > 0.0) {
            return bad(format!("user {i} weight must be finite and > 0"));
        }
        if u.ap_id >= aps.len() {
            return bad(format!("user {i} refers to missing AP {}", u.ap_id));
        }
        let closest = closest_ap(aps, &u.position).expect("aps is non-empty");
        if closest != u.ap_id {
            return bad(format!(
                "user {i} is associated with AP {} but AP {closest} is closer",
                u.ap_id
            ));
        }
    }
    let n = users.len();
    if overlap.len() != n || overlap.iter().any(|row| row.len() != n) {
        return bad(format!("overlap must be a {n}x{n} matrix"));
    }
    for i in 0..n {
        for j in 0..n {
            let v = overlap[i][j];
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("overlap[{i}][{j}] = {v} is outside [0, 1]"));
            }
            if v != overlap[j][i] {
                return bad(format!("overlap is not symmetric at ({i}, {j})"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::overlap::OverlapModel;

    fn two_cell() -> NetworkInstance {
        let aps = vec![
            AccessPoint { id: 0, position: Position::new(0.0, 0.0), channel: 1 },
            AccessPoint { id: 1, position: Position::new(20.0, 0.0), channel: 1 },
        ];
        let pos = [Position::new(3.0, 0.0), Position::new(17.0, 1.0), Position::new(-2.0, 2.0)];
        NetworkInstance::from_positions(aps, &pos, &[1.0; 3], PhysicsParams::default(), &OverlapModel::Channels)
            .unwrap()
    }

    #[test]
    fn association_is_by_proximity() {
        let net = two_cell();
        let aps: Vec<_> = net.users().iter().map(|u| u.ap_id).collect();
        assert_eq!(aps, vec![0, 1, 0]);
        assert_eq!(net.cell(0).unwrap(), &[0, 2]);
        assert!(matches!(net.cell(5), Err(Error::UnknownAp(5))));
    }

    #[test]
    fn equidistant_user_goes_to_lowest_ap() {
        let aps = vec![
            AccessPoint { id: 0, position: Position::new(0.0, 0.0), channel: 1 },
            AccessPoint { id: 1, position: Position::new(10.0, 0.0), channel: 6 },
        ];
        assert_eq!(closest_ap(&aps, &Position::new(5.0, 3.0)), Some(0));
    }

    #[test]
    fn json_round_trip_preserves_instance() {
        let net = two_cell();
        let back = NetworkInstance::from_json(&net.to_json().unwrap()).unwrap();
        assert_eq!(net, back);
        assert_eq!(net.links().solo_tau(), back.links().solo_tau());
    }

    #[test]
    fn rejects_wrong_association_and_asymmetric_overlap() {
        let net = two_cell();
        let mut raw: RawInstance = net.clone().into();
        raw.users[0].ap_id = 1;
        assert!(NetworkInstance::try_from(raw).is_err());

        let mut raw: RawInstance = net.into();
        raw.overlap[0][1] = 0.5;
        assert!(NetworkInstance::try_from(raw).is_err());
    }

    #[test]
    fn rejects_empty_and_bad_weights() {
        let net = two_cell();
        let mut raw: RawInstance = net.clone().into();
        raw.users.clear();
        raw.overlap.clear();
        assert!(NetworkInstance::try_from(raw).is_err());

        let mut raw: RawInstance = net.into();
        raw.users[1].weight = 0.0;
        assert!(NetworkInstance::try_from(raw).is_err());
    }
}
