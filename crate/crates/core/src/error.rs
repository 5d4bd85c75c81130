use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid physics parameters: {0}")]
    InvalidPhysics(String),

    #[error("invalid network instance: {0}")]
    InvalidInstance(String),

    #[error("user {user} is not a member of the activation set")]
    NotActive { user: usize },

    #[error("activation set is infeasible: {0}")]
    Infeasible(String),

    #[error("degenerate geometry: user {user} sits on AP {ap}")]
    DegenerateGeometry { user: usize, ap: usize },

    #[error("unknown overlap model `{0}`")]
    UnknownOverlapModel(String),

    #[error("unknown access point {0}")]
    UnknownAp(usize),

    #[error("invalid schedule distribution: {0}")]
    InvalidDistribution(String),

    #[error("feasible family has {columns} sets, over the budget of {budget}")]
    BudgetExceeded { columns: u128, budget: usize },

    #[error("solver did not converge within {iterations} iterations (gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("user {0} is never scheduled; its expected AoI is infinite")]
    StarvedUser(usize),

    #[error("user {user} has {deliveries} deliveries, need at least 2")]
    InsufficientDeliveries { user: usize, deliveries: usize },

    #[error("unsupported layout: {0}")]
    UnsupportedLayout(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("oracle limit: {0}")]
    OracleTooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
