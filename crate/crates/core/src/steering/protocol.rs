use std::f64::consts::{FRAC_PI_4, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::OperatorKind;
use crate::lossy::{conditional_number_b, number_marginal_a, LossChannel};
use crate::stats::{inferred_commutator_modulus, inferred_variance_quadrature, NoonInference, Which};

/// Linear combination of homodyne moments equal to `[n, Q^N]` up to a phase.
///
/// `(coefficient, quadrature, power)` triples, built from `X`, `P`,
/// `X_{π/4}` and `P_{π/4} = X_{3π/4}` only.
pub fn protocol_terms(n: usize, which: Which) -> Result<Vec<(f64, OperatorKind<f64>, usize)>> {
    let x = OperatorKind::X;
    let p = OperatorKind::P;
    let x45 = OperatorKind::Quadrature(FRAC_PI_4);
    let p45 = OperatorKind::Quadrature(3.0 * FRAC_PI_4);
    Ok(match (n, which) {
        // [n, P] = iX, [n, X] = -iP
        (1, Which::P) => vec![(1.0, x, 1)],
        (1, Which::X) => vec![(1.0, p, 1)],
        // XP + PX = 2X_{π/4}² - X² - P²
        (2, _) => vec![(2.0, x45, 2), (-1.0, x, 2), (-1.0, p, 2)],
        (3, Which::P) => vec![(SQRT_2, x45, 3), (-SQRT_2, p45, 3), (-1.0, x, 3)],
        (3, Which::X) => vec![(SQRT_2, x45, 3), (SQRT_2, p45, 3), (-1.0, p, 3)],
        _ => return Err(Error::UnsupportedOrder { n, max: 3 }),
    })
}

/// Measurable right-hand side `½ ∫ P(x) |Σ_j c_j ⟨Q_j^N⟩_x| dx` for the
/// momentum criterion.
pub fn protocol_rhs(n: usize, phi: f64, channel: LossChannel<f64>) -> Result<f64> {
    protocol_rhs_for(n, phi, channel, Which::P)
}

pub fn protocol_rhs_for(n: usize, phi: f64, channel: LossChannel<f64>, which: Which) -> Result<f64> {
    let terms = protocol_terms(n, which)?;
    let modulus = NoonInference::new(n, phi, channel)?.combination_modulus(&terms)?;
    Ok(0.5 * modulus)
}

/// Number statistics split by `n_a = 0` versus `n_a > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub p1: f64,
    pub p2: f64,
    pub hill1_mean: f64,
    pub hill1_var: f64,
    pub hill2_mean: f64,
    pub hill2_var: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

fn mean_var(dist: &[f64]) -> (f64, f64) {
    let total: f64 = dist.iter().sum();
    if total <= 0.0 {
        return (0.0, 0.0);
    }
    let mean = dist.iter().enumerate().map(|(k, p)| k as f64 * p).sum::<f64>() / total;
    let var = dist
        .iter()
        .enumerate()
        .map(|(k, p)| p * (k as f64 - mean).powi(2))
        .sum::<f64>()
        / total;
    (mean, var)
}

/// `(P₁ Δ²n₁ + P₂ Δ²n₂) Δ²_inf(Q^N)` against `|⟨[n, Q^N]⟩|²_inf / 4`.
pub fn coherence_inequality(
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    which: Which,
) -> Result<CoherenceReport> {
    let marginal = number_marginal_a(n, channel);
    let p2 = marginal[0];
    let p1: f64 = marginal[1..].iter().sum();

    let mut hill1 = vec![0.0; n + 1];
    for (m, pm) in marginal.iter().enumerate().skip(1) {
        for (k, q) in conditional_number_b(n, channel, m)?.into_iter().enumerate() {
            hill1[k] += pm * q;
        }
    }
    let (hill1_mean, hill1_var) = mean_var(&hill1);
    let (hill2_mean, hill2_var) = mean_var(&conditional_number_b(n, channel, 0)?);

    let var_q = inferred_variance_quadrature(n, phi, channel, which)?;
    let commutator = inferred_commutator_modulus(n, phi, channel, which)?;
    let lhs = (p1 * hill1_var + p2 * hill2_var) * var_q;
    let rhs = commutator * commutator / 4.0;
    Ok(CoherenceReport {
        p1,
        p2,
        hill1_mean,
        hill1_var,
        hill2_mean,
        hill2_var,
        lhs,
        rhs,
        violated: lhs < rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ideal() -> LossChannel<f64> {
        LossChannel::lossless()
    }

    #[test]
    fn protocol_values() {
        let r1 = protocol_rhs(1, 0.0, ideal()).unwrap();
        assert!((r1 - 0.5 * (2.0 / PI).sqrt()).abs() < 1e-9);
        let r2 = protocol_rhs(2, FRAC_PI_2, ideal()).unwrap();
        assert!((r2 - 0.5 * 1.9357658).abs() < 1e-6);
        let r3 = protocol_rhs(3, 0.0, ideal()).unwrap();
        assert!((r3 - 0.5 * 4.530039).abs() < 1e-5);
        assert!(matches!(
            protocol_rhs(4, FRAC_PI_2, ideal()),
            Err(Error::UnsupportedOrder { n: 4, max: 3 })
        ));
    }

    #[test]
    fn protocol_tracks_commutator_under_loss() {
        let c = LossChannel::new(0.8, 0.9).unwrap();
        for (n, phi, which) in [(1, 0.3, Which::P), (2, 1.0, Which::P), (3, 0.2, Which::P), (3, 1.1, Which::X), (1, 1.2, Which::X)] {
            let rhs = protocol_rhs_for(n, phi, c, which).unwrap();
            let comm = inferred_commutator_modulus(n, phi, c, which).unwrap();
            assert!((rhs - comm / 2.0).abs() < 1e-6, "N={n}");
        }
    }

    #[test]
    fn coherence_reports() {
        let r = coherence_inequality(2, FRAC_PI_2, ideal(), Which::P).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!((r.rhs - 0.936797).abs() < 1e-3);
        assert!(r.violated);
        for (eta, expect) in [(0.99, true), (0.5, false)] {
            let r = coherence_inequality(2, FRAC_PI_2, LossChannel::symmetric(eta).unwrap(), Which::P).unwrap();
            assert_eq!(r.violated, expect, "eta={eta}");
            assert!((r.p1 + r.p2 - 1.0).abs() < 1e-12);
            assert!(r.hill1_var >= 0.0 && r.hill2_var >= 0.0);
        }
    }
}
