use super::drift::DriftTerms;
use super::{AgeState, PolicyDecision};
use crate::model::{ActivationSet, LinkModel, NetworkInstance};

/// Exhaustive Max-Weight: the feasible set with the largest drift index,
/// ties going to the lexicographically smallest member list.
///
/// Depth-first over APs, each either silent or serving one of its users.
/// Interference at every stacked member is carried down the recursion, so a
/// leaf costs one pass over its members plus a single logarithm.
pub fn mw_select(instance: &NetworkInstance, ages: &AgeState) -> PolicyDecision {
    let links = instance.links();
    let terms = DriftTerms::new(links, ages);
    let k = links.cells().len();
    let mut search = Search {
        links,
        terms: &terms,
        stack: Vec::with_capacity(k),
        intf: vec![vec![0.0; k]; k + 1],
        lin: vec![0.0; k + 1],
        quad: vec![0.0; k + 1],
        best_val: f64::NEG_INFINITY,
        best: Vec::new(),
        scratch: Vec::with_capacity(k),
    };
    search.visit(0);
    PolicyDecision::for_set(links, ActivationSet::from_sorted_unchecked(search.best))
}

struct Search<'a> {
    links: &'a LinkModel,
    terms: &'a DriftTerms,
    stack: Vec<usize>,
    /// `intf[d][p]`: interference at stack member `p` with `d` members stacked.
    intf: Vec<Vec<f64>>,
    lin: Vec<f64>,
    quad: Vec<f64>,
    best_val: f64,
    best: Vec<usize>,
    scratch: Vec<usize>,
}

impl Search<'_> {
    fn visit(&mut self, ap: usize) {
        let cells = self.links.cells();
        if ap == cells.len() {
            self.leaf();
            return;
        }
        self.visit(ap + 1);
        for &u in &cells[ap] {
            self.push(u);
            self.visit(ap + 1);
            self.stack.pop();
        }
    }

    fn push(&mut self, u: usize) {
        let s = self.stack.len();
        let (head, tail) = self.intf.split_at_mut(s + 1);
        let (prev, next) = (&head[s], &mut tail[0]);
        let mut own = 0.0;
        for (p, &m) in self.stack.iter().enumerate() {
            next[p] = prev[p] + self.links.gain(m, u);
            own += self.links.gain(u, m);
        }
        next[s] = own;
        self.lin[s + 1] = self.lin[s] + self.terms.lin[u];
        self.quad[s + 1] = self.quad[s] + self.terms.quad[u];
        self.stack.push(u);
    }

    fn leaf(&mut self) {
        let s = self.stack.len();
        let delta = if s == 0 {
            1
        } else {
            let row = &self.intf[s];
            let worst = self
                .stack
                .iter()
                .enumerate()
                .map(|(p, &m)| self.links.sinr_with(m, row[p]))
                .fold(f64::INFINITY, f64::min);
            self.links.physics().update_slots(worst)
        };
        let val = self.terms.combine(self.lin[s], self.quad[s], delta);
        if val < self.best_val {
            return;
        }
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.stack);
        self.scratch.sort_unstable();
        if val > self.best_val || self.scratch < self.best {
            self.best_val = val;
            std::mem::swap(&mut self.best, &mut self.scratch);
        }
    }
}
