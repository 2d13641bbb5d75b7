//! Inferred statistics of an arbitrary two-mode density matrix.
//!
//! Works for any state on a finite cutoff (separable mixtures, lossy NOON
//! states, ...) by projecting mode a onto `|x⟩` numerically. It is the slow,
//! general counterpart of [`NoonInference`](super::NoonInference).

use super::quadrature::{integrate, QuadratureGrid};
use crate::error::{Error, Result};
use crate::fock::{operator_power_block, oscillator_ladder, OperatorKind, MAX_ORDER};
use crate::linalg::CMatrix;
use crate::lossy::{TwoModeDensity, CONDITIONING_FLOOR};

#[derive(Debug, Clone)]
pub struct DensityInference {
    rho: TwoModeDensity<f64>,
    grid: QuadratureGrid,
}

impl DensityInference {
    pub fn new(rho: TwoModeDensity<f64>) -> Result<Self> {
        if rho.dim() > MAX_ORDER + 1 {
            return Err(Error::OutOfSupportedOrder {
                order: rho.dim() - 1,
                max: MAX_ORDER,
            });
        }
        Ok(Self {
            rho,
            grid: QuadratureGrid::default(),
        })
    }

    pub fn with_grid(mut self, grid: QuadratureGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn density(&self) -> &TwoModeDensity<f64> {
        &self.rho
    }

    /// `⟨x|_a ρ |x⟩_a` as a matrix on mode b; its trace is `P(x)`.
    pub fn conditional_weights(&self, x: f64) -> CMatrix<f64> {
        let d = self.rho.dim();
        let psi = oscillator_ladder(d - 1, x).expect("cutoff checked at construction");
        let mut out = CMatrix::zeros(d);
        for a in 0..d {
            for a2 in 0..d {
                let w = psi[a] * psi[a2];
                if w == 0.0 {
                    continue;
                }
                for b in 0..d {
                    for b2 in 0..d {
                        out[(b, b2)] += self.rho.element(a, b, a2, b2) * w;
                    }
                }
            }
        }
        out
    }

    pub fn px_density(&self, x: f64) -> f64 {
        self.conditional_weights(x).trace().re
    }

    /// `⟨Q^k⟩` conditioned on `x`.
    pub fn conditional_moment(&self, kind: OperatorKind<f64>, power: usize, x: f64) -> Result<f64> {
        let w = self.conditional_weights(x);
        let p = w.trace().re;
        if !(p >= CONDITIONING_FLOOR) {
            return Err(Error::ZeroProbabilityConditioning { x });
        }
        let q = operator_power_block(kind, power, self.rho.dim());
        Ok(w.trace_product(&q).re / p)
    }

    /// `∫ P(x) Var(Q^k | x) dx`.
    pub fn inferred_variance(&self, kind: OperatorKind<f64>, power: usize) -> Result<f64> {
        let d = self.rho.dim();
        let q1 = operator_power_block(kind, power, d);
        let q2 = operator_power_block(kind, 2 * power, d);
        integrate(
            |x| {
                let w = self.conditional_weights(x);
                let p = w.trace().re;
                let m2 = w.trace_product(&q2).re;
                if p < CONDITIONING_FLOOR {
                    return m2.max(0.0);
                }
                let m1 = w.trace_product(&q1).re;
                (m2 - m1 * m1 / p).max(0.0)
            },
            &self.grid,
        )
    }

    /// `∫ |Tr(ρ_x O)| dx` for a mode-b operator `O` on the cutoff.
    pub fn inferred_modulus(&self, operator: &CMatrix<f64>) -> Result<f64> {
        integrate(
            |x| self.conditional_weights(x).trace_product(operator).norm(),
            &self.grid,
        )
    }

    /// `∫ |⟨[n_b, Q^k]⟩_x| P(x) dx`.
    pub fn inferred_commutator(&self, kind: OperatorKind<f64>, power: usize) -> Result<f64> {
        let q = operator_power_block(kind, power, self.rho.dim());
        let c = CMatrix::from_fn(q.dim(), |i, j| q[(i, j)] * (i as f64 - j as f64));
        self.inferred_modulus(&c)
    }

    /// `Σ_m P(n_a = m) Var(n_b | m)` from the joint number distribution.
    pub fn inferred_number_variance(&self) -> f64 {
        let d = self.rho.dim();
        let joint = self.rho.number_distribution();
        let mut total = 0.0;
        for m in 0..d {
            let row = &joint[m * d..(m + 1) * d];
            let pm: f64 = row.iter().sum();
            if pm <= 0.0 {
                continue;
            }
            let mean: f64 = row.iter().enumerate().map(|(k, p)| k as f64 * p).sum::<f64>() / pm;
            let var: f64 = row
                .iter()
                .enumerate()
                .map(|(k, p)| p * (k as f64 - mean).powi(2))
                .sum();
            total += var;
        }
        total
    }
}
