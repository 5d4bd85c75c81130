use super::AgeState;
use crate::model::{ActivationSet, LinkModel, NetworkInstance};

/// Per-user pieces of the Max-Weight objective for a fixed age vector.
///
/// With `lin_i = 2 w_i A_i` and `quad_i = w_i A_i^2` the index of a set is
/// `sum_S lin + (sum_S quad) / Delta - W Delta`, and the negative drift ratio
/// is that minus `sum_all lin`.
pub(crate) struct DriftTerms {
    pub lin: Vec<f64>,
    pub quad: Vec<f64>,
    pub total_weight: f64,
    pub lin_total: f64,
}

impl DriftTerms {
    pub fn new(links: &LinkModel, ages: &AgeState) -> Self {
        let w = links.weights();
        assert_eq!(ages.len(), w.len(), "age vector length must equal the number of users");
        let lin: Vec<f64> = ages.ages.iter().zip(w).map(|(&a, &w)| 2.0 * w * a as f64).collect();
        let quad: Vec<f64> = ages.ages.iter().zip(w).map(|(&a, &w)| w * (a as f64) * (a as f64)).collect();
        Self { lin_total: lin.iter().sum(), total_weight: w.iter().sum(), lin, quad }
    }

    #[inline]
    pub fn combine(&self, lin: f64, quad: f64, delta: u32) -> f64 {
        let d = delta as f64;
        (lin + quad / d) - self.total_weight * d
    }

    /// Index of a set given its frame length; members sorted ascending.
    #[inline]
    pub fn index_with(&self, members: &[usize], delta: u32) -> f64 {
        let mut lin = 0.0;
        let mut quad = 0.0;
        for &i in members {
            lin += self.lin[i];
            quad += self.quad[i];
        }
        self.combine(lin, quad, delta)
    }

    pub fn index(&self, links: &LinkModel, members: &[usize]) -> f64 {
        self.index_with(members, links.frame_len(members))
    }

    /// `-phi(S)`, the objective of the local search.
    pub fn neg_ratio(&self, links: &LinkModel, members: &[usize]) -> f64 {
        self.index(links, members) - self.lin_total
    }
}

/// Max-Weight index `sum_S w_i (2 A_i + A_i^2 / Delta(S)) - sum_all w_i Delta(S)`.
pub fn drift_index(instance: &NetworkInstance, ages: &AgeState, set: &ActivationSet) -> f64 {
    let links = instance.links();
    DriftTerms::new(links, ages).index(links, set.members())
}

/// Lyapunov drift per slot over one frame, `(L(t + Delta) - L(t)) / Delta`,
/// where members end the frame at age `Delta` and everyone else ages by
/// `Delta`.
pub fn drift_ratio(instance: &NetworkInstance, ages: &AgeState, set: &ActivationSet) -> f64 {
    let links = instance.links();
    let delta = links.frame_len(set.members()) as f64;
    let w = links.weights();
    let mut before = 0.0;
    let mut after = 0.0;
    for (i, &a) in ages.ages.iter().enumerate() {
        let a = a as f64;
        let next = if set.contains(i) { delta } else { a + delta };
        before += w[i] * a * a;
        after += w[i] * next * next;
    }
    (after - before) / delta
}
