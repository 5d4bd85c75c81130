//! Offline programs: the optimal stationary randomized policy and the
//! throughput lower bound, plus grid-search oracles for tiny instances.

mod oracle;
mod program;
mod simplex;
mod solver;


pub use oracle::{lower_bound_oracle, srp_oracle, MAX_ORACLE_SETS};
pub use program::{build_program, ConvexProgramData, DEFAULT_COLUMN_BUDGET};
pub use solver::{solve_lower_bound, solve_srp, LowerBound, SolveReport, DEFAULT_TOLERANCE, MAX_ITERATIONS};
