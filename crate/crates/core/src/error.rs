use thiserror::Error;

/// Errors raised by the steering library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("oscillator order {order} exceeds the supported maximum {max}")]
    OutOfSupportedOrder { order: usize, max: usize },

    #[error("Fock cutoff {dim} too small for N = {n} (need dim > N)")]
    DimTooSmall { dim: usize, n: usize },

    #[error("efficiency {name} = {value} outside [0, 1]")]
    InvalidEfficiency { name: &'static str, value: f64 },

    #[error("conditioning probability P(x) vanishes at x = {x}")]
    ZeroProbabilityConditioning { x: f64 },

    #[error("number outcome {m} outside [0, {n}]")]
    InvalidOutcome { m: usize, n: usize },

    #[error(
        "adaptive quadrature did not converge: error estimate {error:e} above tolerance {tolerance:e} after {intervals} intervals"
    )]
    ConvergenceFailure {
        intervals: usize,
        error: f64,
        tolerance: f64,
    },

    #[error(
        "criterion {criterion} is non-discriminating for N = {n} at phi = {phi}: the inferred commutator vanishes identically"
    )]
    NondiscriminatingPhase {
        n: usize,
        phi: f64,
        criterion: char,
    },

    #[error("degenerate channel: eta_a * eta_b = 0 leaves no inferred commutator")]
    DegenerateChannel,

    #[error("no threshold in [{lo}, {hi}]: E({lo}) = {e_lo}, E({hi}) = {e_hi}")]
    NoThresholdInBracket {
        lo: f64,
        hi: f64,
        e_lo: f64,
        e_hi: f64,
    },

    #[error("order N = {n} unsupported here (maximum {max})")]
    UnsupportedOrder { n: usize, max: usize },

    #[error("rejection sampler acceptance {acceptance:e} indicates a bad envelope")]
    EnvelopeFailure { acceptance: f64 },

    #[error("x-bins left with fewer than {min_occupancy} shots per setting after merging")]
    InsufficientBinOccupancy { min_occupancy: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
