use serde::{Deserialize, Serialize};

use super::functional::steering_functional;
use crate::error::{Error, Result};
use crate::lossy::LossChannel;
use crate::stats::Which;

/// Which efficiency is scanned when searching for `E = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "value")]
pub enum ThresholdMode {
    /// `η_a = η_b = η`.
    Symmetric,
    /// `η_a` held at the value, `η_b` scanned.
    FixEtaA(f64),
    /// `η_b` held at the value, `η_a` scanned.
    FixEtaB(f64),
}

impl ThresholdMode {
    pub fn channel(self, eta: f64) -> Result<LossChannel<f64>> {
        match self {
            ThresholdMode::Symmetric => LossChannel::symmetric(eta),
            ThresholdMode::FixEtaA(a) => LossChannel::new(a, eta),
            ThresholdMode::FixEtaB(b) => LossChannel::new(eta, b),
        }
    }
}

pub const BRACKET: (f64, f64) = (0.5, 1.0);
const SCAN_POINTS: usize = 51;
const WIDTH_TOLERANCE: f64 = 1e-6;
const VALUE_TOLERANCE: f64 = 1e-6;

/// Efficiency `η*` at which `E(η*) = 1`, searched in `[0.5, 1]`.
///
/// `E` is scanned first; bisection runs on the highest-efficiency crossing
/// from `E ≥ 1` to `E < 1`, until both the bracket width and `|E - 1|` fall
/// below `1e-6`.
pub fn threshold_efficiency(n: usize, phi: f64, which: Which, mode: ThresholdMode) -> Result<f64> {
    let e_at = |eta: f64| -> Result<f64> {
        Ok(steering_functional(n, phi, mode.channel(eta)?, which)?.e)
    };
    let (lo, hi) = BRACKET;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let etas: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + i as f64 * step).collect();
    let values = etas.iter().map(|&eta| e_at(eta)).collect::<Result<Vec<_>>>()?;

    let (e_lo, e_hi) = (values[0], values[SCAN_POINTS - 1]);
    if !(e_lo >= 1.0 && e_hi < 1.0) {
        return Err(Error::NoThresholdInBracket { lo, hi, e_lo, e_hi });
    }
    let k = (0..SCAN_POINTS - 1)
        .rev()
        .find(|&i| values[i] >= 1.0 && values[i + 1] < 1.0)
        .expect("endpoints straddle one");

    let (mut a, mut b) = (etas[k], etas[k + 1]);
    let mut mid = 0.5 * (a + b);
    for _ in 0..200 {
        mid = 0.5 * (a + b);
        let e = e_at(mid)?;
        if b - a < WIDTH_TOLERANCE && (e - 1.0).abs() < VALUE_TOLERANCE {
            break;
        }
        if e >= 1.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < f64::EPSILON {
            break;
        }
    }
    Ok(mid)
}
