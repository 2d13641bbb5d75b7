//! Lossy NOON states under the beam-splitter loss model.
//!
//! Each mode passes a beam splitter of transmission `η` whose second input is
//! vacuum; the reflected port is traced out. The detected two-mode state keeps
//! two binomial population ladders and a single coherence between `|N,0⟩` and
//! `|0,N⟩`, damped by `(η_a η_b)^{N/2}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{oscillator_ladder, TwoModeKet};
use crate::linalg::CMatrix;
use crate::scalar::Scalar;

/// Transmission efficiencies of the two loss beam splitters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossChannel<T> {
    pub eta_a: T,
    pub eta_b: T,
}

impl<T: Scalar> LossChannel<T> {
    pub fn new(eta_a: T, eta_b: T) -> Result<Self> {
        for (name, value) in [("eta_a", eta_a), ("eta_b", eta_b)] {
            if !(value >= T::zero() && value <= T::one()) {
                return Err(Error::InvalidEfficiency {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        Ok(Self { eta_a, eta_b })
    }

    pub fn lossless() -> Self {
        Self {
            eta_a: T::one(),
            eta_b: T::one(),
        }
    }

    pub fn symmetric(eta: T) -> Result<Self> {
        Self::new(eta, eta)
    }

    pub fn is_lossless(&self) -> bool {
        self.eta_a == T::one() && self.eta_b == T::one()
    }

    /// `(η_a η_b)^{N/2}`, the damping of the N-th order coherence.
    pub fn coherence_factor(&self, n: usize) -> T {
        (self.eta_a * self.eta_b).sqrt().powi(n as i32)
    }
}

pub(crate) fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1);
    }
    acc
}

/// `C(N,k) ηᵏ (1-η)^{N-k}`, with `0⁰ = 1`.
pub(crate) fn binomial_weight<T: Scalar>(n: usize, k: usize, eta: T) -> T {
    binomial::<T>(n, k) * eta.powi(k as i32) * (T::one() - eta).powi((n - k) as i32)
}

/// Two-mode density matrix over `|n_a⟩|n_b⟩`, index `n_a·dim + n_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeDensity<T> {
    dim: usize,
    matrix: CMatrix<T>,
}

impl<T: Scalar> TwoModeDensity<T> {
    pub fn from_matrix(dim: usize, matrix: CMatrix<T>) -> Result<Self> {
        if matrix.dim() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "matrix of size {} does not match cutoff {dim}",
                matrix.dim()
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn from_ket(ket: &TwoModeKet<T>) -> Self {
        let amps = ket.amplitudes();
        let matrix = CMatrix::from_fn(amps.len(), |i, j| amps[i] * amps[j].conj());
        Self {
            dim: ket.dim(),
            matrix,
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights are normalised to sum to one.
    pub fn mixture(components: &[(T, Self)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let dim = first.1.dim;
        let total: T = components.iter().map(|(w, _)| *w).sum();
        let mut matrix = CMatrix::zeros(dim * dim);
        for (w, rho) in components {
            if rho.dim != dim || *w < T::zero() {
                return Err(Error::InvalidArgument(
                    "mixture components need equal cutoffs and nonnegative weights".into(),
                ));
            }
            matrix = &matrix + &rho.matrix.scale_real(*w / total);
        }
        Ok(Self { dim, matrix })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `⟨a, b| ρ |a', b'⟩`
    #[inline]
    pub fn element(&self, a: usize, b: usize, a2: usize, b2: usize) -> Complex<T> {
        self.matrix[(a * self.dim + b, a2 * self.dim + b2)]
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn is_positive_semidefinite(&self, floor: T) -> bool {
        self.matrix.is_positive_semidefinite(floor)
    }

    /// Reduced state of mode a.
    pub fn reduced_a(&self) -> OneModeDensity<T> {
        let d = self.dim;
        let matrix = CMatrix::from_fn(d, |i, j| (0..d).map(|k| self.element(i, k, j, k)).sum());
        OneModeDensity { dim: d, matrix }
    }

    /// Reduced state of mode b.
    pub fn reduced_b(&self) -> OneModeDensity<T> {
        let d = self.dim;
        let matrix = CMatrix::from_fn(d, |i, j| (0..d).map(|k| self.element(k, i, k, j)).sum());
        OneModeDensity { dim: d, matrix }
    }

    /// Joint photon-number probabilities, index `n_a·dim + n_b`.
    pub fn number_distribution(&self) -> Vec<T> {
        (0..self.dim * self.dim)
            .map(|i| self.matrix[(i, i)].re.max(T::zero()))
            .collect()
    }
}

/// Single-mode density matrix on `dim` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct OneModeDensity<T> {
    dim: usize,
    matrix: CMatrix<T>,
}

impl<T: Scalar> OneModeDensity<T> {
    pub fn from_matrix(matrix: CMatrix<T>) -> Self {
        Self {
            dim: matrix.dim(),
            matrix,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// `Tr(ρ O)` for an operator given on the same cutoff.
    pub fn expectation(&self, operator: &CMatrix<T>) -> Complex<T> {
        self.matrix.trace_product(operator)
    }

    pub fn populations(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn is_positive_semidefinite(&self, floor: T) -> bool {
        self.matrix.is_positive_semidefinite(floor)
    }
}

/// Detected two-mode state of a lossy NOON state on cutoff `dim > N`.
pub fn lossy_noon_density<T: Scalar>(
    n: usize,
    phi: T,
    channel: LossChannel<T>,
    dim: usize,
) -> Result<TwoModeDensity<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("NOON states need N >= 1".into()));
    }
    if dim <= n {
        return Err(Error::DimTooSmall { dim, n });
    }
    let half = T::lit(0.5);
    let idx = |a: usize, b: usize| a * dim + b;
    let mut matrix = CMatrix::zeros(dim * dim);
    for k in 0..=n {
        let wa = half * binomial_weight(n, k, channel.eta_a);
        let wb = half * binomial_weight(n, k, channel.eta_b);
        matrix[(idx(k, 0), idx(k, 0))] += Complex::new(wa, T::zero());
        matrix[(idx(0, k), idx(0, k))] += Complex::new(wb, T::zero());
    }
    let coherence = Complex::from_polar(half * channel.coherence_factor(n), -phi);
    matrix[(idx(n, 0), idx(0, n))] = coherence;
    matrix[(idx(0, n), idx(n, 0))] = coherence.conj();
    Ok(TwoModeDensity { dim, matrix })
}

/// Unnormalised state of mode b after the outcome `x` of `X_a`:
/// `⟨x|_a ρ |x⟩_a`, whose trace is the outcome density `P(x)`.
///
/// Only the populations `0..=N` and the coherence `⟨0|ρ|N⟩` are nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalWeights<T> {
    pub populations: Vec<T>,
    /// `⟨0|ρ|N⟩`
    pub coherence: Complex<T>,
}

impl<T: Scalar> ConditionalWeights<T> {
    pub fn order(&self) -> usize {
        self.populations.len() - 1
    }

    pub fn probability(&self) -> T {
        self.populations.iter().copied().sum()
    }

    /// Dense `(N+1)×(N+1)` matrix of the weights (unnormalised).
    pub fn to_matrix(&self) -> CMatrix<T> {
        let n = self.order();
        let mut m = CMatrix::diagonal(&self.populations);
        m[(0, n)] += self.coherence;
        m[(n, 0)] += self.coherence.conj();
        m
    }
}

/// Conditional weights from the oscillator values `ψ_k(x)`, `k = 0..=N`.
pub(crate) fn conditional_weights_from_ladder<T: Scalar>(
    n: usize,
    phi: T,
    channel: &LossChannel<T>,
    psi: &[T],
) -> ConditionalWeights<T> {
    let half = T::lit(0.5);
    let mut populations = vec![T::zero(); n + 1];
    let vac = psi[0] * psi[0];
    for k in 0..=n {
        // a-branch: n_a = k detected, mode b empty
        populations[0] += half * binomial_weight(n, k, channel.eta_a) * psi[k] * psi[k];
        // b-branch: mode a empty, n_b = k detected
        populations[k] += half * binomial_weight(n, k, channel.eta_b) * vac;
    }
    let coherence =
        Complex::from_polar(half * channel.coherence_factor(n) * psi[n] * psi[0], -phi);
    ConditionalWeights {
        populations,
        coherence,
    }
}

pub fn conditional_weights<T: Scalar>(
    n: usize,
    phi: T,
    channel: LossChannel<T>,
    x: T,
) -> Result<ConditionalWeights<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("NOON states need N >= 1".into()));
    }
    let psi = oscillator_ladder(n, x)?;
    Ok(conditional_weights_from_ladder(n, phi, &channel, &psi))
}

pub(crate) const CONDITIONING_FLOOR: f64 = 1e-300;

/// Normalised state of mode b given the outcome `x` of `X_a`.
pub fn conditional_density_given_x<T: Scalar>(
    n: usize,
    phi: T,
    channel: LossChannel<T>,
    x: T,
) -> Result<OneModeDensity<T>> {
    let weights = conditional_weights(n, phi, channel, x)?;
    let p = weights.probability();
    if !(p.as_f64() >= CONDITIONING_FLOOR) {
        return Err(Error::ZeroProbabilityConditioning { x: x.as_f64() });
    }
    Ok(OneModeDensity::from_matrix(weights.to_matrix().scale_real(p.recip())))
}

/// Distribution of the detected `n_a`, `m = 0..=N`.
pub fn number_marginal_a<T: Scalar>(n: usize, channel: LossChannel<T>) -> Vec<T> {
    let half = T::lit(0.5);
    (0..=n)
        .map(|m| {
            let ladder = half * binomial_weight(n, m, channel.eta_a);
            if m == 0 {
                ladder + half
            } else {
                ladder
            }
        })
        .collect()
}

/// Distribution of `n_b` over `0..=N` given the outcome `n_a = m`.
///
/// For `m > 0` the b-mode is always empty. A null-probability outcome
/// (e.g. `m > 0` at `η_a = 0`) still returns that point mass.
pub fn conditional_number_b<T: Scalar>(
    n: usize,
    channel: LossChannel<T>,
    m: usize,
) -> Result<Vec<T>> {
    if m > n {
        return Err(Error::InvalidOutcome { m, n });
    }
    let mut out = vec![T::zero(); n + 1];
    if m > 0 {
        out[0] = T::one();
        return Ok(out);
    }
    let from_a = binomial_weight(n, 0, channel.eta_a);
    let total = from_a + T::one();
    out[0] = from_a / total;
    for k in 0..=n {
        out[k] += binomial_weight(n, k, channel.eta_b) / total;
    }
    Ok(out)
}
