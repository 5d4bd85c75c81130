//! Approximate Max-Weight by two-pass local search over the partition
//! matroid of feasible sets.

use serde::Serialize;

use super::drift::DriftTerms;
use super::{AgeState, PolicyDecision};
use crate::model::{ActivationSet, LinkModel, NetworkInstance};

pub const DEFAULT_EPSILON: f64 = 0.1;

/// Accepted sets and objective values of one pass, seed first.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PassTrace {
    pub ground: Vec<usize>,
    pub sets: Vec<ActivationSet>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LocalSearchTrace {
    pub passes: Vec<PassTrace>,
    /// Relative improvement a move needed to be accepted, `epsilon / N^4`.
    pub threshold: f64,
}

pub fn amw_select(instance: &NetworkInstance, ages: &AgeState, epsilon: f64) -> PolicyDecision {
    run(instance, ages, epsilon, None)
}

/// Same decision as [`amw_select`], also returning every accepted move.
pub fn amw_select_traced(
    instance: &NetworkInstance,
    ages: &AgeState,
    epsilon: f64,
) -> (PolicyDecision, LocalSearchTrace) {
    let mut trace = LocalSearchTrace::default();
    let d = run(instance, ages, epsilon, Some(&mut trace));
    (d, trace)
}

fn run(
    instance: &NetworkInstance,
    ages: &AgeState,
    epsilon: f64,
    mut trace: Option<&mut LocalSearchTrace>,
) -> PolicyDecision {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let links = instance.links();
    let n = links.num_users();
    let terms = DriftTerms::new(links, ages);
    let threshold = epsilon / (n as f64).powi(4);
    let solo = links.solo_tau();
    let min_solo = solo.iter().copied().min().unwrap_or(1).max(1) as f64;
    let key = (0..n).map(|u| terms.lin[u] + terms.quad[u] / min_solo).collect();
    let max_solo = solo.iter().copied().max().unwrap_or(1);
    let search = LocalSearch { links, terms: &terms, threshold, key, max_solo };
    if let Some(t) = trace.as_deref_mut() {
        t.threshold = threshold;
    }

    let all: Vec<usize> = (0..n).collect();
    let mut order = all.clone();
    order.sort_unstable_by(|&a, &b| search.key[b].total_cmp(&search.key[a]).then(a.cmp(&b)));
    let first = search.pass(&all, &order, trace.as_deref_mut());
    let rest: Vec<usize> = all.iter().copied().filter(|u| first.0.binary_search(u).is_err()).collect();
    let second = if rest.is_empty() {
        None
    } else {
        order.retain(|u| first.0.binary_search(u).is_err());
        Some(search.pass(&rest, &order, trace))
    };

    let best = match second {
        Some(s) if better(s.1, &s.0, first.1, &first.0) => s.0,
        _ => first.0,
    };
    PolicyDecision::for_set(links, ActivationSet::from_sorted_unchecked(best))
}

/// Strictly larger value, or an equal value with a lexicographically smaller
/// member list.
fn better(val: f64, set: &[usize], best_val: f64, best: &[usize]) -> bool {
    val > best_val || (val == best_val && set < best)
}

struct LocalSearch<'a> {
    links: &'a LinkModel,
    terms: &'a DriftTerms,
    threshold: f64,
    /// Upper bound on what adding a user contributes: `lin + quad / min solo`.
    key: Vec<f64>,
    max_solo: u32,
}

struct Best {
    val: f64,
    set: Vec<usize>,
}

impl Best {
    fn none() -> Self {
        Self { val: f64::NEG_INFINITY, set: Vec::new() }
    }

    fn offer(&mut self, val: f64, set: &[usize]) {
        if better(val, set, self.val, &self.set) {
            self.val = val;
            self.set.clear();
            self.set.extend_from_slice(set);
        }
    }
}

impl LocalSearch<'_> {
    fn value(&self, members: &[usize]) -> f64 {
        self.terms.neg_ratio(self.links, members)
    }

    /// The move rule: a strict increase of at least `threshold * |old|`.
    /// For a positive objective this is the multiplicative `(1 + eps/N^4)`
    /// test; it stays meaningful when the objective is negative.
    fn accepts(&self, new: f64, old: f64) -> bool {
        new > old && new - old >= self.threshold * old.abs()
    }

    /// One pass over `ground` (sorted). Returns the final set and its value.
    /// `order` holds the same users as `ground`, by descending `key`.
    fn pass(&self, ground: &[usize], order: &[usize], trace: Option<&mut LocalSearchTrace>) -> (Vec<usize>, f64) {
        let solo = self.links.solo_tau();
        let t = self.terms;
        let mut seed = Best::none();
        for &u in ground {
            seed.offer(t.index_with(&[u], solo[u]) - t.lin_total, &[u]);
        }
        let mut cur = seed.set;
        let mut cur_val = seed.val;
        let mut record = trace.is_some().then(|| PassTrace { ground: ground.to_vec(), ..Default::default() });
        let mut log = |set: &[usize], val: f64| {
            if let Some(r) = record.as_mut() {
                r.sets.push(ActivationSet::from_sorted_unchecked(set.to_vec()));
                r.values.push(val);
            }
        };
        log(&cur, cur_val);

        let mut buf = Vec::with_capacity(cur.len() + 1);
        let mut minus_len = Vec::with_capacity(cur.len());
        loop {
            let mut moved = false;

            let mut del = Best::none();
            self.deletions(&cur, &mut buf, &mut minus_len, |val, set| del.offer(val, set));
            if !cur.is_empty() && self.accepts(del.val, cur_val) {
                cur = del.set;
                cur_val = del.val;
                moved = true;
                log(&cur, cur_val);
                self.deletions(&cur, &mut buf, &mut minus_len, |_, _| {});
            }

            let cur_len = self.links.frame_len(&cur);
            if let Some(ex) = self.best_exchange(&cur, cur_val, cur_len, &minus_len, order) {
                cur = ex.set;
                cur_val = ex.val;
                moved = true;
                log(&cur, cur_val);
            }

            if !moved {
                break;
            }
        }
        if let (Some(t), Some(r)) = (trace, record) {
            t.passes.push(r);
        }
        (cur, cur_val)
    }

    /// Offers every `S - i` to `sink` and records its frame length in
    /// `minus_len[i]`.
    fn deletions(
        &self,
        cur: &[usize],
        buf: &mut Vec<usize>,
        minus_len: &mut Vec<u32>,
        mut sink: impl FnMut(f64, &[usize]),
    ) {
        minus_len.clear();
        for p in 0..cur.len() {
            buf.clear();
            buf.extend(cur.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &u)| u));
            let len = self.links.frame_len(buf);
            minus_len.push(len);
            sink(self.terms.index_with(buf, len) - self.terms.lin_total, buf);
        }
    }

    /// Best accepted `S - i + j` over `j` in the ground set outside `S` and
    /// `i` in `S` or nothing. Adding a transmitter never shortens anyone, so
    /// the new frame is at least `len(S - i)`, `solo(j)` and `len({m, j})`
    /// for every remaining `m`; candidates whose objective at that length
    /// cannot pass are skipped.
    fn best_exchange(
        &self,
        cur: &[usize],
        cur_val: f64,
        cur_len: u32,
        minus_len: &[u32],
        order: &[usize],
    ) -> Option<Best> {
        let links = self.links;
        let solo = links.solo_tau();
        let t = self.terms;

        let mut lin = 0.0;
        let mut quad = 0.0;
        for &u in cur {
            lin += t.lin[u];
            quad += t.quad[u];
        }
        let need = cur_val + self.threshold * cur_val.abs();
        let occupant: Vec<Option<usize>> = {
            let mut occ = vec![None; links.cells().len()];
            for (p, &u) in cur.iter().enumerate() {
                occ[links.ap_of(u)] = Some(p);
            }
            occ
        };

        let mut best = Best::none();
        let mut buf = Vec::with_capacity(cur.len() + 1);
        let mut consider = |remove: Option<usize>, j: usize, best: &mut Best| {
            let (l, q, rest_len) = match remove {
                Some(p) => {
                    let i = cur[p];
                    (lin - t.lin[i] + t.lin[j], quad - t.quad[i] + t.quad[j], minus_len[p])
                }
                None => (lin + t.lin[j], quad + t.quad[j], cur_len),
            };
            let mut delta_lb = rest_len.max(solo[j]);
            for (p, &m) in cur.iter().enumerate() {
                if Some(p) != remove {
                    delta_lb = delta_lb.max(links.pair_len(m, j).unwrap_or(0));
                }
            }
            let bound = t.combine(l, q, delta_lb) - t.lin_total;
            let slack = 1e-9 * (l.abs() + q.abs() + t.total_weight * delta_lb as f64 + t.lin_total);
            let target = need.max(best.val);
            if bound + slack < target {
                return;
            }
            buf.clear();
            buf.extend(cur.iter().enumerate().filter(|&(p, _)| Some(p) != remove).map(|(_, &u)| u));
            let at = buf.partition_point(|&u| u < j);
            buf.insert(at, j);
            let val = self.value(&buf);
            if self.accepts(val, cur_val) {
                best.offer(val, &buf);
            }
        };

        // Every candidate's bound is at most `c_r + key[j]`, with `c_r` the
        // objective of the remainder at its own frame length; `order` is
        // sorted by `key` so each removal choice stops at the first j below
        // the target.
        let max_key = order.first().map_or(0.0, |&j| self.key[j]);
        for r in std::iter::once(None).chain((0..cur.len()).map(Some)) {
            let (l_r, q_r, len_r) = match r {
                Some(p) => (lin - t.lin[cur[p]], quad - t.quad[cur[p]], minus_len[p]),
                None => (lin, quad, cur_len),
            };
            let c_r = t.combine(l_r, q_r, len_r) - t.lin_total;
            let slack = 1e-9
                * (l_r.abs() + q_r.abs() + max_key + t.lin_total + t.total_weight * len_r.max(self.max_solo) as f64);
            for &j in order {
                if c_r + self.key[j] + slack < need.max(best.val) {
                    break;
                }
                let allowed = match occupant[links.ap_of(j)] {
                    Some(p) => r == Some(p) && cur[p] != j,
                    None => true,
                };
                if allowed {
                    consider(r, j, &mut best);
                }
            }
        }
        (best.val > f64::NEG_INFINITY).then_some(best)
    }
}
