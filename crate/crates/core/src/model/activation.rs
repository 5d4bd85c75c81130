use serde::{Deserialize, Serialize};

use super::network::NetworkInstance;
use crate::error::{Error, Result};

/// A set of concurrently transmitting users with at most one user per AP.
///
/// Members are kept sorted ascending, so the derived `Ord` is the
/// lexicographic order on member lists used for tie-breaking.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ActivationSet(Vec<usize>);

/// Sorts and rejects duplicates; the partition constraint needs an instance
/// and is checked separately.
impl TryFrom<Vec<usize>> for ActivationSet {
    type Error = Error;

    fn try_from(mut m: Vec<usize>) -> Result<Self> {
        m.sort_unstable();
        if m.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Infeasible("duplicate member".into()));
        }
        Ok(Self(m))
    }
}

impl From<ActivationSet> for Vec<usize> {
    fn from(s: ActivationSet) -> Self {
        s.0
    }
}

impl ActivationSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Validates ids, duplicates and the one-user-per-AP constraint.
    pub fn new(instance: &NetworkInstance, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut m: Vec<usize> = members.into_iter().collect();
        m.sort_unstable();
        let n = instance.num_users();
        if let Some(&u) = m.iter().find(|&&u| u >= n) {
            return Err(Error::Infeasible(format!("user {u} does not exist")));
        }
        if m.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Infeasible("duplicate member".into()));
        }
        let mut seen = vec![false; instance.num_aps()];
        for &u in &m {
            let k = instance.users()[u].ap_id;
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::Infeasible(format!("AP {k} has more than one active user")));
            }
        }
        Ok(Self(m))
    }

    /// Caller guarantees `members` is sorted, duplicate-free and feasible.
    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    pub(crate) fn from_unsorted_unchecked(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        Self::from_sorted_unchecked(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, user: usize) -> bool {
        self.0.binary_search(&user).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether the set respects the partition constraint of `instance`.
    pub fn is_feasible(&self, instance: &NetworkInstance) -> bool {
        Self::new(instance, self.0.iter().copied()).is_ok()
    }
}

/// Number of feasible sets, `prod_k (|N_k| + 1)`, including the empty set.
pub fn family_size(instance: &NetworkInstance) -> u128 {
    instance
        .links()
        .cells()
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128 + 1))
}

/// Lazily enumerates every feasible activation set, the empty set first.
///
/// Order is a mixed-radix counter with AP 0 as the fastest digit; digit 0
/// means the AP is silent and digit `d` selects the d-th user of its cell.
pub fn feasible_sets(instance: &NetworkInstance) -> FeasibleSets<'_> {
    let cells = instance.links().cells();
    FeasibleSets { cells, digits: vec![0; cells.len()], done: false }
}

pub struct FeasibleSets<'a> {
    cells: &'a [Vec<usize>],
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for FeasibleSets<'_> {
    type Item = ActivationSet;

    fn next(&mut self) -> Option<ActivationSet> {
        if self.done {
            return None;
        }
        let members = self
            .digits
            .iter()
            .zip(self.cells)
            .filter(|(&d, _)| d > 0)
            .map(|(&d, cell)| cell[d - 1])
            .collect();
        let out = ActivationSet::from_unsorted_unchecked(members);

        self.done = true;
        for (d, cell) in self.digits.iter_mut().zip(self.cells) {
            if *d < cell.len() {
                *d += 1;
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::model::testing::{grid_instance, line_instance};

    #[test]
    fn two_aps_one_user_each_gives_four_sets() {
        let net = line_instance(&[1, 1], 0.0);
        let sets: Vec<_> = feasible_sets(&net).map(|s| s.members().to_vec()).collect();
        assert_eq!(sets, vec![vec![], vec![0], vec![1], vec![0, 1]]);
        assert_eq!(family_size(&net), 4);
    }

    #[test]
    fn three_aps_five_users_each_gives_216() {
        let net = grid_instance(3, 5);
        assert_eq!(feasible_sets(&net).count(), 216);
        assert_eq!(family_size(&net), 216);
    }

    #[test]
    fn enumeration_matches_powerset_filter() {
        // |N_1| = 3, |N_2| = 2
        let net = line_instance(&[3, 2], 0.3);
        let enumerated: HashSet<Vec<usize>> = feasible_sets(&net).map(|s| s.members().to_vec()).collect();
        assert_eq!(enumerated.len(), 12);
        assert_eq!(feasible_sets(&net).count(), 12);

        let n = net.num_users();
        let brute: HashSet<Vec<usize>> = (0u32..1 << n)
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|m| {
                let aps: Vec<_> = m.iter().map(|&u| net.users()[u].ap_id).collect();
                let uniq: HashSet<_> = aps.iter().collect();
                uniq.len() == aps.len()
            })
            .collect();
        assert_eq!(enumerated, brute);
    }

    #[test]
    fn constructor_rejects_two_users_on_one_ap() {
        let net = line_instance(&[3, 2], 0.3);
        assert!(ActivationSet::new(&net, [0, 1]).is_err());
        assert!(ActivationSet::new(&net, [0, 0]).is_err());
        assert!(ActivationSet::new(&net, [9]).is_err());
        let s = ActivationSet::new(&net, [3, 0]).unwrap();
        assert_eq!(s.members(), &[0, 3]);
        assert!(s.contains(3) && !s.contains(1));
    }

    #[test]
    fn json_members_are_sorted_on_load() {
        let s: ActivationSet = serde_json::from_str("[4, 1]").unwrap();
        assert_eq!(s.members(), &[1, 4]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,4]");
        assert!(serde_json::from_str::<ActivationSet>("[2, 2]").is_err());
    }

    #[test]
    fn lexicographic_order_puts_empty_first() {
        let a = ActivationSet::from_sorted_unchecked(vec![]);
        let b = ActivationSet::from_sorted_unchecked(vec![0, 5]);
        let c = ActivationSet::from_sorted_unchecked(vec![1]);
        assert!(a < b && b < c);
    }
}
