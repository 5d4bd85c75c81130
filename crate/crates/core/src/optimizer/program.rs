use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{family_size, feasible_sets, ActivationSet, NetworkInstance};

/// Largest family the solvers will materialize.
pub const DEFAULT_COLUMN_BUDGET: usize = 100_000;

/// The stationary-policy program over every feasible set: frame lengths
/// `b_S`, their squares `a_S`, and sparse membership columns.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexProgramData {
    pub sets: Vec<ActivationSet>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub weights: Vec<f64>,
    pub num_aps: usize,
    #[serde(skip)]
    offsets: Vec<usize>,
    #[serde(skip)]
    flat: Vec<usize>,
}

impl ConvexProgramData {
    pub fn num_columns(&self) -> usize {
        self.sets.len()
    }

    pub fn num_users(&self) -> usize {
        self.weights.len()
    }

    /// Users of column `c`, ascending.
    #[inline]
    pub fn column(&self, c: usize) -> &[usize] {
        &self.flat[self.offsets[c]..self.offsets[c + 1]]
    }

    /// Entry `M[i][c]` of the membership matrix.
    pub fn member(&self, i: usize, c: usize) -> bool {
        self.column(c).binary_search(&i).is_ok()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Enumerates the feasible family, refusing when it exceeds `budget` columns.
pub fn build_program(instance: &NetworkInstance, budget: usize) -> Result<ConvexProgramData> {
    let columns = family_size(instance);
    if columns > budget as u128 {
        return Err(Error::BudgetExceeded { columns, budget });
    }
    let links = instance.links();
    let cap = columns as usize;
    let mut sets = Vec::with_capacity(cap);
    let mut b = Vec::with_capacity(cap);
    let mut offsets = Vec::with_capacity(cap + 1);
    let mut flat = Vec::new();
    offsets.push(0);
    for s in feasible_sets(instance) {
        b.push(links.frame_len(s.members()) as f64);
        flat.extend_from_slice(s.members());
        offsets.push(flat.len());
        sets.push(s);
    }
    Ok(ConvexProgramData {
        a: b.iter().map(|x| x * x).collect(),
        b,
        sets,
        weights: instance.weights().to_vec(),
        num_aps: instance.num_aps(),
        offsets,
        flat,
    })
}
