//! Age-of-Information scheduling for multi-AP WLANs whose transmission times
//! depend on which users transmit together.

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod model;
pub mod optimizer;
pub mod policy;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
