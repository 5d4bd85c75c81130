//! Slot-level simulation under any policy.

mod engine;
mod trace;


pub use engine::{run_asynchronous_baseline, run_frame_synchronous, ResetMode, SimConfig, DEFAULT_HORIZON};
pub use trace::{weighted_average_aoi, Delivery, DeliverySamples, FrameRecord, SimTrace};
