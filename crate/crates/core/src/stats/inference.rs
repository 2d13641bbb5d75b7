//! Inferred variances and commutator moduli of a lossy NOON state when mode b
//! is predicted from a measurement of `X_a` (quadratures) or `n_a` (number).
//!
//! For an outcome `x` the unnormalised conditional state of mode b only has
//! populations on `0..=N` and the `⟨0|ρ|N⟩` coherence, so every conditional
//! moment is a short sum of exact operator-power matrix elements weighted by
//! oscillator wavefunctions. Only the outer `∫dx` is numerical.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, QuadratureGrid};
use crate::error::{Error, Result};
use crate::fock::{operator_power_block, oscillator_ladder, OperatorKind};
use crate::lossy::{
    conditional_weights_from_ladder, number_marginal_a, ConditionalWeights, LossChannel,
    CONDITIONING_FLOOR,
};

/// Highest NOON order handled by the inference engine.
pub const MAX_INFERENCE_ORDER: usize = 8;

/// Quadrature inferred on mode b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    X,
    P,
}

impl Which {
    pub fn as_char(self) -> char {
        match self {
            Which::X => 'x',
            Which::P => 'p',
        }
    }

    pub fn operator(self) -> OperatorKind<f64> {
        match self {
            Which::X => OperatorKind::X,
            Which::P => OperatorKind::P,
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Which::X),
            "p" => Ok(Which::P),
            other => Err(Error::InvalidArgument(format!(
                "unknown criterion {other:?}, expected x or p"
            ))),
        }
    }
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("NOON states need N >= 1".into()));
    }
    if n > MAX_INFERENCE_ORDER {
        return Err(Error::UnsupportedOrder {
            n,
            max: MAX_INFERENCE_ORDER,
        });
    }
    Ok(())
}

/// Matrix elements of `Q^k` needed against the conditional weights.
#[derive(Debug, Clone)]
struct PowerElements {
    diagonal: Vec<f64>,
    /// `⟨N|Q^k|0⟩`
    corner: Complex<f64>,
}

impl PowerElements {
    fn new(kind: OperatorKind<f64>, power: usize, n: usize) -> Self {
        let block = operator_power_block(kind, power, n + 1);
        Self {
            diagonal: (0..=n).map(|k| block[(k, k)].re).collect(),
            corner: block[(n, 0)],
        }
    }

    /// `Tr(ρ_x Q^k)` for unnormalised weights `ρ_x`.
    fn weighted(&self, w: &ConditionalWeights<f64>) -> f64 {
        let pops: f64 = w
            .populations
            .iter()
            .zip(&self.diagonal)
            .map(|(p, d)| p * d)
            .sum();
        pops + 2.0 * (w.coherence * self.corner).re
    }
}

/// Inference engine for one NOON configuration.
#[derive(Debug, Clone)]
pub struct NoonInference {
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    grid: QuadratureGrid,
}

impl NoonInference {
    pub fn new(n: usize, phi: f64, channel: LossChannel<f64>) -> Result<Self> {
        check_order(n)?;
        Ok(Self {
            n,
            phi,
            channel,
            grid: QuadratureGrid::default(),
        })
    }

    pub fn with_grid(mut self, grid: QuadratureGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> f64 {
        self.phi
    }

    pub fn channel(&self) -> LossChannel<f64> {
        self.channel
    }

    pub fn weights(&self, x: f64) -> ConditionalWeights<f64> {
        let psi = oscillator_ladder(self.n, x).expect("order checked at construction");
        conditional_weights_from_ladder(self.n, self.phi, &self.channel, &psi)
    }

    /// Outcome density of `X_a`.
    pub fn px_density(&self, x: f64) -> f64 {
        self.weights(x).probability()
    }

    /// `⟨Q^k⟩` of mode b conditioned on the outcome `x` of `X_a`.
    pub fn conditional_moment(&self, kind: OperatorKind<f64>, power: usize, x: f64) -> Result<f64> {
        let w = self.weights(x);
        let p = w.probability();
        if !(p >= CONDITIONING_FLOOR) {
            return Err(Error::ZeroProbabilityConditioning { x });
        }
        Ok(PowerElements::new(kind, power, self.n).weighted(&w) / p)
    }

    /// `∫ P(x) Var(Q^N | x) dx`, with the integrand kept as
    /// `W_{2N} - W_N²/P` so vanishing `P(x)` contributes nothing.
    pub fn inferred_variance(&self, kind: OperatorKind<f64>) -> Result<f64> {
        let first = PowerElements::new(kind, self.n, self.n);
        let second = PowerElements::new(kind, 2 * self.n, self.n);
        let value = integrate(
            |x| {
                let w = self.weights(x);
                let p = w.probability();
                let w2 = second.weighted(&w);
                if p < CONDITIONING_FLOOR {
                    return w2.max(0.0);
                }
                let w1 = first.weighted(&w);
                (w2 - w1 * w1 / p).max(0.0)
            },
            &self.grid,
        )?;
        Ok(value)
    }

    /// `|Im(e^{-iφ}⟨N|Q^N|0⟩)| / √N!`: the phase dependence of the commutator.
    pub fn phase_factor(&self, kind: OperatorKind<f64>) -> f64 {
        let corner = PowerElements::new(kind, self.n, self.n).corner;
        (Complex::from_polar(1.0, -self.phi) * corner).im.abs() / factorial(self.n).sqrt()
    }

    /// `∫ |⟨[n_b, Q^N]⟩_x| P(x) dx`.
    ///
    /// Only the coherence feeds the commutator, which gives
    /// `N √N! |trig| (η_a η_b)^{N/2} ∫|ψ_0 ψ_N| dx` at every order.
    pub fn commutator_modulus(&self, kind: OperatorKind<f64>) -> Result<f64> {
        let n = self.n;
        let kappa = self.channel.coherence_factor(n);
        let trig = self.phase_factor(kind);
        if kappa == 0.0 || trig == 0.0 {
            return Ok(0.0);
        }
        let overlap = vacuum_overlap_integral(n, &self.grid)?;
        Ok(n as f64 * factorial(n).sqrt() * trig * kappa * overlap)
    }

    /// `∫ |Σ_j c_j W_j(x)| dx` with `W_j(x) = P(x)⟨Q_j^{k_j}⟩_x`: the inferred
    /// modulus of a linear combination of conditional moments.
    pub fn combination_modulus(&self, terms: &[(f64, OperatorKind<f64>, usize)]) -> Result<f64> {
        let elements: Vec<(f64, PowerElements)> = terms
            .iter()
            .map(|&(c, kind, power)| (c, PowerElements::new(kind, power, self.n)))
            .collect();
        integrate(
            |x| {
                let w = self.weights(x);
                elements
                    .iter()
                    .map(|(c, e)| c * e.weighted(&w))
                    .sum::<f64>()
                    .abs()
            },
            &self.grid,
        )
    }

    pub fn moments(&self, which: Which) -> Result<InferredMoments> {
        let kind = which.operator();
        Ok(InferredMoments {
            n: self.n,
            phi: self.phi,
            channel: self.channel,
            which,
            var_number: inferred_number_variance(self.n, self.channel),
            var_quadrature_n: self.inferred_variance(kind)?,
            commutator_modulus: self.commutator_modulus(kind)?,
        })
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `∫ |ψ_0(x) ψ_N(x)| dx`.
pub fn vacuum_overlap_integral(n: usize, grid: &QuadratureGrid) -> Result<f64> {
    integrate(
        |x| {
            let psi = oscillator_ladder(n, x).expect("supported order");
            (psi[0] * psi[n]).abs()
        },
        grid,
    )
}

/// Inferred number variance and the quadrature-side components of one criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferredMoments {
    pub n: usize,
    pub phi: f64,
    pub channel: LossChannel<f64>,
    pub which: Which,
    pub var_number: f64,
    pub var_quadrature_n: f64,
    pub commutator_modulus: f64,
}

pub fn px_density(n: usize, phi: f64, channel: LossChannel<f64>, x: f64) -> Result<f64> {
    Ok(NoonInference::new(n, phi, channel)?.px_density(x))
}

pub fn conditional_quadrature_moment(
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    order: usize,
    x: f64,
    which: Which,
) -> Result<f64> {
    NoonInference::new(n, phi, channel)?.conditional_moment(which.operator(), order, x)
}

/// Conditional moment of the rotated quadrature `X_θ = X cos θ + P sin θ`.
pub fn conditional_rotated_moment(
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    order: usize,
    x: f64,
    theta: f64,
) -> Result<f64> {
    NoonInference::new(n, phi, channel)?.conditional_moment(OperatorKind::Quadrature(theta), order, x)
}

pub fn inferred_variance_quadrature(
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    which: Which,
) -> Result<f64> {
    NoonInference::new(n, phi, channel)?.inferred_variance(which.operator())
}

/// `Σ_m P(n_a = m) Var(n_b | m)` in closed form.
pub fn inferred_number_variance(n: usize, channel: LossChannel<f64>) -> f64 {
    let nf = n as f64;
    let eb = channel.eta_b;
    let dark = (1.0 - channel.eta_a).powi(n as i32);
    let numerator = eb * (nf - nf * eb) + nf * dark * (eb - eb * eb + nf * eb * eb);
    (numerator / (2.0 * (dark + 1.0))).max(0.0)
}

pub fn inferred_commutator_modulus(
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    which: Which,
) -> Result<f64> {
    NoonInference::new(n, phi, channel)?.commutator_modulus(which.operator())
}

pub fn inferred_moments(
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    which: Which,
) -> Result<InferredMoments> {
    NoonInference::new(n, phi, channel)?.moments(which)
}

/// Number variance summed from the marginal and conditional tables.
pub fn inferred_number_variance_from_tables(n: usize, channel: LossChannel<f64>) -> Result<f64> {
    let marginal = number_marginal_a(n, channel);
    let mut total = 0.0;
    for (m, pm) in marginal.iter().enumerate() {
        if *pm == 0.0 {
            continue;
        }
        let q = crate::lossy::conditional_number_b(n, channel, m)?;
        let mean: f64 = q.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        let var: f64 = q.iter().enumerate().map(|(k, p)| p * (k as f64 - mean).powi(2)).sum();
        total += pm * var;
    }
    Ok(total)
}
