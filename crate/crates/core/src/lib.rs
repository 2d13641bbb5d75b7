//! EPR steering functionals for ideal and lossy two-mode NOON states.
//!
//! Quadratures follow `X = a + a†`, `P = (a - a†)/i`, so `[X, P] = 2i` and
//! the vacuum has unit quadrature variance. Mode b's photon number and the
//! N-th power of a quadrature are inferred from photon counting or an `X_a`
//! homodyne measurement on mode a. The criterion is violated, certifying
//! steering, when `E = 2 Δ_inf n_b Δ_inf Q_b^N / |⟨[n_b, Q_b^N]⟩|_inf < 1`.
//!
//! Layers, bottom up:
//!
//! * [`fock`]: Hermite functions, NOON kets, truncated ladder operators.
//! * [`lossy`]: beam-splitter loss, conditional states and number tables.
//! * [`stats`]: inferred variances and commutators by adaptive quadrature.
//! * [`steering`]: the functional, thresholds, sweeps, protocol forms.
//! * [`sampling`]: a shot-level Monte Carlo oracle for all of the above.
//!
//! The Fock and loss layers are generic over [`Scalar`]; the aliases below
//! fix them to `f64`, the precision everything downstream works in.

pub mod error;
pub mod fock;
pub mod linalg;
pub mod lossy;
pub mod sampling;
pub mod scalar;
pub mod stats;
pub mod steering;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use stats::{InferredMoments, QuadratureGrid, Which};
pub use steering::{CoherenceReport, SteeringReport};
pub use sampling::{SteeringEstimate, ShotRecord};

pub type Real = f64;
pub type Complex = num_complex::Complex<f64>;
pub type Matrix = linalg::CMatrix<f64>;
pub type Ket = fock::TwoModeKet<f64>;
pub type Channel = lossy::LossChannel<f64>;
pub type Density = lossy::TwoModeDensity<f64>;
pub type ModeDensity = lossy::OneModeDensity<f64>;
