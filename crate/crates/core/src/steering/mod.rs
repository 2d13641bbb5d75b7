//! Steering functionals, efficiency thresholds, parameter sweeps and the
//! homodyne-protocol and coherence variants of the criterion.

mod functional;
mod protocol;
mod sweep;
mod threshold;

pub use functional::{
    default_phase, e1p_closed_form, functional_value, steering_functional, SteeringReport,
    PHASE_TOLERANCE,
};
pub use protocol::{
    coherence_inequality, protocol_rhs, protocol_rhs_for, protocol_terms, CoherenceReport,
};
pub use sweep::{sweep, EtaGrid, PhiRule, SweepGrid, SweepRow};
pub use threshold::{threshold_efficiency, ThresholdMode, BRACKET};
