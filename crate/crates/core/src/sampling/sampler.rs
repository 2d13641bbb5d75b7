use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{oscillator_ladder, OperatorKind};
use crate::lossy::{lossy_noon_density, ConditionalWeights, LossChannel};
use crate::stats::NoonInference;

/// Local measurement pair used for one shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    Number,
    XThenP,
    XThenX,
    XThenXPi4,
    XThenPPi4,
}

impl Setting {
    pub const ALL: [Setting; 5] = [
        Setting::Number,
        Setting::XThenP,
        Setting::XThenX,
        Setting::XThenXPi4,
        Setting::XThenPPi4,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Setting::Number => "number",
            Setting::XThenP => "x_then_p",
            Setting::XThenX => "x_then_x",
            Setting::XThenXPi4 => "x_then_x_pi4",
            Setting::XThenPPi4 => "x_then_p_pi4",
        }
    }

    /// Homodyne angle on mode b, `None` for photon counting.
    pub fn angle(self) -> Option<f64> {
        match self {
            Setting::Number => None,
            Setting::XThenX => Some(0.0),
            Setting::XThenXPi4 => Some(FRAC_PI_4),
            Setting::XThenP => Some(FRAC_PI_2),
            Setting::XThenPPi4 => Some(3.0 * FRAC_PI_4),
        }
    }

    /// Setting whose b-quadrature is `kind`.
    pub fn for_operator(kind: OperatorKind<f64>) -> Result<Self> {
        match kind {
            OperatorKind::X => Ok(Setting::XThenX),
            OperatorKind::P => Ok(Setting::XThenP),
            OperatorKind::Quadrature(t) if (t - FRAC_PI_4).abs() < 1e-12 => Ok(Setting::XThenXPi4),
            OperatorKind::Quadrature(t) if (t - 3.0 * FRAC_PI_4).abs() < 1e-12 => Ok(Setting::XThenPPi4),
            OperatorKind::Quadrature(t) if t.abs() < 1e-12 => Ok(Setting::XThenX),
            other => Err(Error::InvalidArgument(format!(
                "no homodyne setting measures {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|setting| setting.label() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown setting {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Count(usize),
    Real(f64),
}

impl Outcome {
    pub fn value(self) -> f64 {
        match self {
            Outcome::Count(k) => k as f64,
            Outcome::Real(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub setting: Setting,
    pub outcome_a: Outcome,
    pub outcome_b: Outcome,
}

pub const CDF_NODES: usize = 4096;
const CDF_HALF_WIDTH: f64 = 12.0;
const ENVELOPE_MARGIN: f64 = 1.1;
const MAX_ATTEMPTS: usize = 100_000;

/// Precomputed tables for drawing shots of one configuration.
#[derive(Debug, Clone)]
pub struct Sampler {
    engine: NoonInference,
    n: usize,
    phi: f64,
    channel: LossChannel<f64>,
    grid: Vec<f64>,
    cdf: Vec<f64>,
    pairs: Vec<(usize, usize)>,
    pair_index: WeightedIndex<f64>,
    envelope: Normal<f64>,
    envelope_sigma: f64,
    envelope_scale: f64,
}

impl Sampler {
    pub fn new(n: usize, phi: f64, channel: LossChannel<f64>) -> Result<Self> {
        let engine = NoonInference::new(n, phi, channel)?;

        let step = 2.0 * CDF_HALF_WIDTH / (CDF_NODES - 1) as f64;
        let grid: Vec<f64> = (0..CDF_NODES).map(|i| -CDF_HALF_WIDTH + i as f64 * step).collect();
        let density: Vec<f64> = grid.iter().map(|&x| engine.px_density(x)).collect();
        let mut cdf = Vec::with_capacity(CDF_NODES);
        cdf.push(0.0);
        for i in 1..CDF_NODES {
            let prev = cdf[i - 1];
            cdf.push(prev + 0.5 * step * (density[i] + density[i - 1]));
        }
        let total = cdf[CDF_NODES - 1];
        for c in &mut cdf {
            *c /= total;
        }

        let dim = n + 1;
        let joint = lossy_noon_density(n, phi, channel, dim)?.number_distribution();
        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        for (i, &p) in joint.iter().enumerate() {
            if p > 0.0 {
                pairs.push((i / dim, i % dim));
                weights.push(p);
            }
        }
        let pair_index = WeightedIndex::new(&weights)
            .map_err(|e| Error::InvalidArgument(format!("number table: {e}")))?;

        let envelope_sigma = (2.0 * (n + 1) as f64).sqrt();
        let envelope = Normal::new(0.0, envelope_sigma).expect("positive sigma");
        let mut worst: f64 = 0.0;
        for i in 0..=3000 {
            let q = -30.0 + i as f64 * 0.02;
            worst = worst.max(level_sum(n, q) / gaussian_pdf(q, envelope_sigma));
        }

        Ok(Self {
            engine,
            n,
            phi,
            channel,
            grid,
            cdf,
            pairs,
            pair_index,
            envelope,
            envelope_sigma,
            envelope_scale: ENVELOPE_MARGIN * worst,
        })
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

    /// Envelope constant `M` of the conditional rejection step; the expected
    /// acceptance is `1/M`.
    pub fn envelope_scale(&self) -> f64 {
        self.envelope_scale
    }

    pub fn sample_number_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        self.pairs[self.pair_index.sample(rng)]
    }

    /// `x_a` from the tabulated inverse CDF.
    pub fn sample_x<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let k = self.cdf.partition_point(|&c| c < u).clamp(1, CDF_NODES - 1);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let (x0, x1) = (self.grid[k - 1], self.grid[k]);
        if c1 > c0 {
            x0 + (u - c0) / (c1 - c0) * (x1 - x0)
        } else {
            x0
        }
    }

    /// Density of the mode-b quadrature at angle `theta` given `x`.
    pub fn conditional_density(&self, weights: &ConditionalWeights<f64>, theta: f64, q: f64) -> f64 {
        let psi = oscillator_ladder(self.n, q).expect("order checked");
        let p = weights.probability();
        let pops: f64 = weights
            .populations
            .iter()
            .zip(&psi)
            .map(|(w, s)| w * s * s)
            .sum();
        let phase = Complex::from_polar(1.0, self.n as f64 * theta);
        let coherence = 2.0 * (weights.coherence * phase).re * psi[0] * psi[self.n];
        ((pops + coherence) / p).max(0.0)
    }

    /// Mode-b quadrature at `theta` conditioned on the outcome `x` of `X_a`,
    /// with the number of envelope draws used.
    pub fn sample_conditional<R: Rng + ?Sized>(
        &self,
        x: f64,
        theta: f64,
        rng: &mut R,
    ) -> Result<(f64, usize)> {
        let weights = self.engine.weights(x);
        if !(weights.probability() > 0.0) {
            return Err(Error::ZeroProbabilityConditioning { x });
        }
        for attempt in 1..=MAX_ATTEMPTS {
            let q = self.envelope.sample(rng);
            let bound = self.envelope_scale * gaussian_pdf(q, self.envelope_sigma);
            let f = self.conditional_density(&weights, theta, q);
            if f > bound {
                return Err(Error::EnvelopeFailure {
                    acceptance: 1.0 / self.envelope_scale,
                });
            }
            if rng.random::<f64>() * bound <= f {
                return Ok((q, attempt));
            }
        }
        Err(Error::EnvelopeFailure {
            acceptance: 1.0 / MAX_ATTEMPTS as f64,
        })
    }

    pub fn sample_quadrature_pair<R: Rng + ?Sized>(
        &self,
        setting: Setting,
        rng: &mut R,
    ) -> Result<(f64, f64)> {
        let theta = setting.angle().ok_or_else(|| {
            Error::InvalidArgument("photon counting is not a quadrature setting".into())
        })?;
        let x = self.sample_x(rng);
        let (q, _) = self.sample_conditional(x, theta, rng)?;
        Ok((x, q))
    }

    pub fn sample_shot<R: Rng + ?Sized>(&self, setting: Setting, rng: &mut R) -> Result<ShotRecord> {
        Ok(match setting {
            Setting::Number => {
                let (a, b) = self.sample_number_pair(rng);
                ShotRecord {
                    setting,
                    outcome_a: Outcome::Count(a),
                    outcome_b: Outcome::Count(b),
                }
            }
            _ => {
                let (x, q) = self.sample_quadrature_pair(setting, rng)?;
                ShotRecord {
                    setting,
                    outcome_a: Outcome::Real(x),
                    outcome_b: Outcome::Real(q),
                }
            }
        })
    }
}

/// `Σ_{k ≤ N} ψ_k(q)²`, which bounds every conditional quadrature density.
fn level_sum(n: usize, q: f64) -> f64 {
    oscillator_ladder(n, q)
        .expect("order checked")
        .iter()
        .map(|v| v * v)
        .sum()
}

fn gaussian_pdf(q: f64, sigma: f64) -> f64 {
    (-0.5 * (q / sigma).powi(2)).exp() / (sigma * (2.0 * PI).sqrt())
}
