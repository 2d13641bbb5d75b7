use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lossy::LossChannel;
use crate::stats::{NoonInference, Which};

/// Below this the phase factor of the inferred commutator counts as zero.
pub const PHASE_TOLERANCE: f64 = 1e-9;

/// Evaluated steering functional for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringReport {
    pub n: usize,
    pub phi: f64,
    pub channel: LossChannel<f64>,
    pub which: Which,
    pub var_number: f64,
    pub var_quadrature_n: f64,
    pub commutator_modulus: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub violated: bool,
}

/// `E = 2 √(Δ²n · Δ²Q^N) / |⟨[n, Q^N]⟩|`.
pub fn functional_value(var_number: f64, var_quadrature: f64, commutator: f64) -> f64 {
    let product = var_number * var_quadrature;
    if product == 0.0 {
        return 0.0;
    }
    2.0 * product.sqrt() / commutator
}

/// Phase at which the criterion is evaluated by default: 0 for odd N, π/2 for even N.
pub fn default_phase(n: usize) -> f64 {
    if n % 2 == 1 {
        0.0
    } else {
        std::f64::consts::FRAC_PI_2
    }
}

pub fn steering_functional(
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    which: Which,
) -> Result<SteeringReport> {
    let engine = NoonInference::new(n, phi, channel)?;
    if engine.phase_factor(which.operator()) < PHASE_TOLERANCE {
        return Err(Error::NondiscriminatingPhase {
            n,
            phi,
            criterion: which.as_char(),
        });
    }
    if channel.eta_a * channel.eta_b == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    let m = engine.moments(which)?;
    let e = functional_value(m.var_number, m.var_quadrature_n, m.commutator_modulus);
    Ok(SteeringReport {
        n,
        phi,
        channel,
        which,
        var_number: m.var_number,
        var_quadrature_n: m.var_quadrature_n,
        commutator_modulus: m.commutator_modulus,
        e,
        violated: e < 1.0,
    })
}

/// Closed-form `E_1^{(p)}` at `φ = 0`.
pub fn e1p_closed_form(channel: LossChannel<f64>) -> Result<f64> {
    let (ea, eb) = (channel.eta_a, channel.eta_b);
    if ea * eb == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    let var_number = eb * (ea + eb - 2.0) / (2.0 * (ea - 2.0));
    let var_p = 1.0 + eb;
    let commutator = (2.0 / std::f64::consts::PI).sqrt() * (ea * eb).sqrt();
    Ok(2.0 * (var_number * var_p).max(0.0).sqrt() / commutator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn sym(eta: f64) -> LossChannel<f64> {
        LossChannel::symmetric(eta).unwrap()
    }

    #[test]
    fn ideal_n1_is_zero() {
        let r = steering_functional(1, 0.0, LossChannel::lossless(), Which::P).unwrap();
        assert_eq!(r.e, 0.0);
        assert!(r.violated);
    }

    #[test]
    fn nondiscriminating_phases() {
        let err = steering_functional(2, 0.0, LossChannel::lossless(), Which::P).unwrap_err();
        assert!(matches!(err, Error::NondiscriminatingPhase { n: 2, criterion: 'p', .. }));
        assert!(steering_functional(1, FRAC_PI_2, sym(0.9), Which::P).is_err());
        assert!(steering_functional(1, 0.0, sym(0.9), Which::X).is_err());
        assert!(steering_functional(3, FRAC_PI_2, sym(0.9), Which::X).is_ok());
    }

    #[test]
    fn degenerate_channel() {
        let c = LossChannel::new(0.0, 0.7).unwrap();
        assert_eq!(steering_functional(1, 0.0, c, Which::P).unwrap_err(), Error::DegenerateChannel);
        assert_eq!(e1p_closed_form(c).unwrap_err(), Error::DegenerateChannel);
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(e1p_closed_form(LossChannel::lossless()).unwrap(), 0.0);
        assert!((e1p_closed_form(sym(0.9)).unwrap() - 1.098118).abs() < 1e-5);
        assert!((e1p_closed_form(sym(0.95)).unwrap() - 0.783675).abs() < 1e-5);
    }

    #[test]
    fn numeric_matches_closed_form() {
        for &ea in &[0.6, 0.75, 0.9, 1.0] {
            for &eb in &[0.6, 0.8, 0.95, 1.0] {
                let c = LossChannel::new(ea, eb).unwrap();
                let r = steering_functional(1, 0.0, c, Which::P).unwrap();
                assert!((r.e - e1p_closed_form(c).unwrap()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn report_identity() {
        let r = steering_functional(2, FRAC_PI_2, sym(0.98), Which::P).unwrap();
        let e = 2.0 * (r.var_number * r.var_quadrature_n).sqrt() / r.commutator_modulus;
        assert!((r.e - e).abs() < 1e-14);
        assert_eq!(r.violated, r.e < 1.0);
    }
}
