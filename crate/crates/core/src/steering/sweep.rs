use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functional::{default_phase, steering_functional, SteeringReport};
use crate::error::{Error, Result};
use crate::lossy::LossChannel;
use crate::stats::Which;

/// How the NOON phase is picked for each order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "value")]
pub enum PhiRule {
    /// 0 for odd N, π/2 for even N.
    Default,
    Fixed(f64),
}

impl PhiRule {
    pub fn phase(self, n: usize) -> f64 {
        match self {
            PhiRule::Default => default_phase(n),
            PhiRule::Fixed(phi) => phi,
        }
    }
}

/// Inclusive arithmetic grid `start + i·step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl EtaGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let grid = Self { start, stop, step };
        grid.len()?;
        Ok(grid)
    }

    pub fn len(&self) -> Result<usize> {
        let span = self.stop - self.start;
        if !(self.step > 0.0) || !(span > 0.0) || !span.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "eta grid needs start < stop and step > 0 (got {} to {} step {})",
                self.start, self.stop, self.step
            )));
        }
        let count = (span / self.step + 1e-9).floor() as usize + 1;
        if count < 2 {
            return Err(Error::InvalidArgument(
                "eta grid needs at least two points".into(),
            ));
        }
        Ok(count)
    }

    pub fn values(&self) -> Vec<f64> {
        let count = self.len().unwrap_or(0);
        (0..count)
            .map(|i| {
                let v = self.start + i as f64 * self.step;
                if (v - self.stop).abs() < 1e-9 * self.step {
                    self.stop
                } else {
                    v
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SweepGrid {
    /// `η_a = η_b` along one axis.
    Symmetric { eta: EtaGrid },
    /// Full `(η_a, η_b)` product grid.
    Full { eta_a: EtaGrid, eta_b: EtaGrid },
}

impl SweepGrid {
    pub fn points(&self) -> Result<Vec<(f64, f64)>> {
        Ok(match self {
            SweepGrid::Symmetric { eta } => {
                eta.len()?;
                eta.values().into_iter().map(|e| (e, e)).collect()
            }
            SweepGrid::Full { eta_a, eta_b } => {
                eta_a.len()?;
                eta_b.len()?;
                let bs = eta_b.values();
                eta_a
                    .values()
                    .into_iter()
                    .flat_map(|a| bs.iter().map(move |&b| (a, b)))
                    .collect()
            }
        })
    }
}

/// One grid point; failures are kept in the row instead of aborting.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub phi: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub which: Which,
    pub outcome: Result<SteeringReport>,
}

/// Evaluates every `(N, η_a, η_b)` point in parallel; rows come back sorted
/// by `(N, η_a, η_b)` whatever the scheduling.
pub fn sweep(orders: &[usize], rule: PhiRule, which: Which, grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    let points = grid.points()?;
    let mut jobs: Vec<(usize, f64, f64)> = orders
        .iter()
        .flat_map(|&n| points.iter().map(move |&(a, b)| (n, a, b)))
        .collect();
    jobs.sort_by(|l, r| {
        l.0.cmp(&r.0)
            .then(l.1.total_cmp(&r.1))
            .then(l.2.total_cmp(&r.2))
    });
    Ok(jobs
        .into_par_iter()
        .map(|(n, eta_a, eta_b)| {
            let phi = rule.phase(n);
            let outcome = LossChannel::new(eta_a, eta_b)
                .and_then(|channel| steering_functional(n, phi, channel, which));
            SweepRow {
                n,
                phi,
                eta_a,
                eta_b,
                which,
                outcome,
            }
        })
        .collect())
}
