//! Inferred conditional statistics and the integration they rest on.

mod density;
mod inference;
mod quadrature;

pub use inference::{
    conditional_quadrature_moment, conditional_rotated_moment, inferred_commutator_modulus,
    inferred_moments, inferred_number_variance, inferred_number_variance_from_tables,
    inferred_variance_quadrature, px_density, vacuum_overlap_integral, InferredMoments,
    NoonInference, Which, MAX_INFERENCE_ORDER,
};
pub use density::DensityInference;
pub use quadrature::{integrate, QuadratureGrid};
