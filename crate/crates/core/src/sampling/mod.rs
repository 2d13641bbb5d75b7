//! Shot-level simulation of the counting and homodyne protocol, with binned
//! estimators of every inferred quantity.

mod estimate;
mod log;
mod sampler;

pub use estimate::{
    estimate_from_tallies, estimate_steering, measurement_plan, merge_bins, simulate, BinSpec,
    BinTally, Estimate, SamplingConfig, Simulation, SteeringEstimate, Tallies, STDERR_FLOOR,
};
pub use log::{write_shot_log, SHOT_LOG_HEADER};
pub use sampler::{Outcome, Sampler, Setting, ShotRecord, CDF_NODES};
