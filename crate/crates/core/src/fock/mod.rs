//! Fock-basis primitives: Hermite polynomials, oscillator wavefunctions,
//! NOON kets and truncated single-mode operator matrices.

mod hermite;
mod operator;
mod state;
mod wavefunction;

pub use hermite::hermite;
pub use operator::{
    commutator_check, commutator_check_x, operator_matrix, operator_power_block, ModeOperator,
    OperatorKind,
};
pub use state::{coherent_amplitudes, fock_amplitudes, noon_state, TwoModeKet};
pub use wavefunction::{
    momentum_wavefunction, oscillator_ladder, position_wavefunction, quadrature_wavefunction,
    WavefunctionConvention, MAX_ORDER,
};

/// Default per-mode cutoff for an N-quantum state.
pub fn default_dim(n: usize) -> usize {
    n + 12
}
