//! Closed-form evaluations, sample-path estimators and optimality-ratio
//! bounds.

mod moments;
mod ratios;

#[cfg(test)]
mod tests;

pub use moments::{
    empirical_throughput, frame_moments, jensen_holds, renewal_aoi_estimate, moment_summary, renewal_throughput,
    sample_path_age_sum, sample_path_horizon, user_moments, MomentSummary, UserMoments,
};
pub use ratios::{
    psi_frames, psi_lb, ratio_report, srp_expected_aoi, srp_mean_frame, BoundCheck, RatioReport,
};
