use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{Outcome, Sampler, Setting, ShotRecord};
use crate::error::{Error, Result};
use crate::lossy::LossChannel;
use crate::stats::Which;
use crate::steering::protocol_terms;

/// Equal-width x-bins; outcomes outside the range land in the end bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
    pub min_occupancy: usize,
}

impl Default for BinSpec {
    fn default() -> Self {
        Self {
            bins: 40,
            lo: -8.0,
            hi: 8.0,
            min_occupancy: 20,
        }
    }
}

impl BinSpec {
    pub fn with_bins(bins: usize) -> Self {
        Self {
            bins,
            ..Self::default()
        }
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    pub fn index(&self, x: f64) -> usize {
        let k = ((x - self.lo) / self.width()).floor();
        if k < 0.0 {
            0
        } else {
            (k as usize).min(self.bins - 1)
        }
    }

    fn validate(&self) -> Result<()> {
        if self.bins == 0 || !(self.hi > self.lo) {
            return Err(Error::InvalidArgument(format!(
                "bad bin spec: {} bins over [{}, {}]",
                self.bins, self.lo, self.hi
            )));
        }
        Ok(())
    }
}

/// Additive sums of `x` and `y = q^N` for one setting in one bin.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BinTally {
    pub count: u64,
    pub sx: f64,
    pub sxx: f64,
    pub sy: f64,
    pub sxy: f64,
    pub syy: f64,
    pub syyy: f64,
    pub syyyy: f64,
}

impl BinTally {
    fn push(&mut self, x: f64, y: f64) {
        let y2 = y * y;
        self.count += 1;
        self.sx += x;
        self.sxx += x * x;
        self.sy += y;
        self.sxy += x * y;
        self.syy += y2;
        self.syyy += y2 * y;
        self.syyyy += y2 * y2;
    }

    fn merge(&mut self, o: &BinTally) {
        self.count += o.count;
        self.sx += o.sx;
        self.sxx += o.sxx;
        self.sy += o.sy;
        self.sxy += o.sxy;
        self.syy += o.syy;
        self.syyy += o.syyy;
        self.syyyy += o.syyyy;
    }

    /// Residual variance of `y` about its least-squares line in `x`.
    fn residual_variance(&self) -> f64 {
        let n = self.count as f64;
        if self.count < 3 {
            return self.central_moments().0;
        }
        let mx = self.sx / n;
        let my = self.sy / n;
        let cxx = self.sxx - n * mx * mx;
        let cxy = self.sxy - n * mx * my;
        let cyy = self.syy - n * my * my;
        let explained = if cxx > 0.0 { cxy * cxy / cxx } else { 0.0 };
        ((cyy - explained) / (n - 2.0)).max(0.0)
    }

    /// Bessel-corrected variance and fourth central moment of `y`.
    fn central_moments(&self) -> (f64, f64) {
        let n = self.count as f64;
        if self.count < 2 {
            return (0.0, 0.0);
        }
        let m = self.sy / n;
        let e2 = self.syy / n;
        let e3 = self.syyy / n;
        let e4 = self.syyyy / n;
        let var = ((e2 - m * m) * n / (n - 1.0)).max(0.0);
        let m4 = (e4 - 4.0 * m * e3 + 6.0 * m * m * e2 - 3.0 * m.powi(4)).max(0.0);
        (var, m4)
    }
}

/// Per-setting tallies of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Tallies {
    pub settings: Vec<Setting>,
    /// `[setting][bin]`; photon counting uses `n_a` as the bin index.
    pub bins: Vec<Vec<BinTally>>,
}

impl Tallies {
    fn new(settings: &[Setting], n: usize, spec: &BinSpec) -> Self {
        let bins = settings
            .iter()
            .map(|s| match s {
                Setting::Number => vec![BinTally::default(); n + 1],
                _ => vec![BinTally::default(); spec.bins],
            })
            .collect();
        Self {
            settings: settings.to_vec(),
            bins,
        }
    }

    fn merge(&mut self, other: &Tallies) {
        for (mine, theirs) in self.bins.iter_mut().zip(&other.bins) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                a.merge(b);
            }
        }
    }

    fn slot(&self, setting: Setting) -> usize {
        self.settings
            .iter()
            .position(|&s| s == setting)
            .expect("setting in plan")
    }

    pub fn shots(&self, setting: Setting) -> u64 {
        self.bins[self.slot(setting)].iter().map(|b| b.count).sum()
    }
}

/// Estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringEstimate {
    pub e_hat: f64,
    pub stderr: f64,
    pub shots: u64,
    /// x-bin groups left after occupancy merging.
    pub bins: usize,
    pub var_number: Estimate,
    pub var_quadrature_n: Estimate,
    pub commutator_modulus: Estimate,
}

/// Settings measured for order `n` and criterion `which`, in round-robin order.
pub fn measurement_plan(n: usize, which: Which) -> Result<Vec<Setting>> {
    let mut plan = vec![Setting::Number, Setting::for_operator(which.operator())?];
    for (_, kind, _) in protocol_terms(n, which)? {
        let s = Setting::for_operator(kind)?;
        if !plan.contains(&s) {
            plan.push(s);
        }
    }
    Ok(plan)
}

/// Run parameters for the shot-level simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub n: usize,
    pub phi: f64,
    pub channel: LossChannel<f64>,
    pub which: Which,
    pub shots: u64,
    pub seed: u64,
    pub bins: BinSpec,
    /// Independent RNG streams; results depend on this, not on the thread count.
    pub workers: usize,
}

impl SamplingConfig {
    pub const DEFAULT_WORKERS: usize = 8;

    pub fn new(n: usize, phi: f64, channel: LossChannel<f64>, which: Which, shots: u64, seed: u64) -> Self {
        Self {
            n,
            phi,
            channel,
            which,
            shots,
            seed,
            bins: BinSpec::default(),
            workers: Self::DEFAULT_WORKERS,
        }
    }
}

/// Outcome of [`simulate`].
#[derive(Debug, Clone)]
pub struct Simulation {
    pub tallies: Tallies,
    pub records: Option<Vec<ShotRecord>>,
}

/// Draws every shot. Shot `i` uses setting `plan[i mod len]`; worker `w`
/// owns a contiguous block of shot indices and the ChaCha stream `w`.
pub fn simulate(config: &SamplingConfig, keep_records: bool) -> Result<Simulation> {
    config.bins.validate()?;
    let plan = measurement_plan(config.n, config.which)?;
    let sampler = Sampler::new(config.n, config.phi, config.channel)?;
    let workers = config.workers.max(1) as u64;
    let chunk = config.shots.div_ceil(workers);
    let power = config.n as i32;

    let parts = (0..workers)
        .into_par_iter()
        .map(|w| -> Result<(Tallies, Vec<ShotRecord>)> {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(w);
            let mut tallies = Tallies::new(&plan, config.n, &config.bins);
            let mut records = Vec::new();
            let start = (w * chunk).min(config.shots);
            let end = ((w + 1) * chunk).min(config.shots);
            for i in start..end {
                let slot = (i % plan.len() as u64) as usize;
                let shot = sampler.sample_shot(plan[slot], &mut rng)?;
                match (shot.outcome_a, shot.outcome_b) {
                    (Outcome::Count(a), Outcome::Count(b)) => {
                        tallies.bins[slot][a].push(a as f64, b as f64)
                    }
                    (Outcome::Real(x), Outcome::Real(q)) => {
                        tallies.bins[slot][config.bins.index(x)].push(x, q.powi(power))
                    }
                    _ => unreachable!("outcome kinds follow the setting"),
                }
                if keep_records {
                    records.push(shot);
                }
            }
            Ok((tallies, records))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tallies = Tallies::new(&plan, config.n, &config.bins);
    let mut all_records = keep_records.then(Vec::new);
    for (t, r) in parts {
        tallies.merge(&t);
        if let Some(all) = all_records.as_mut() {
            all.extend(r);
        }
    }
    Ok(Simulation {
        tallies,
        records: all_records,
    })
}

/// Contiguous bin ranges in which every quadrature setting has at least
/// `min_occupancy` shots. A trailing remainder joins the last group.
pub fn merge_bins(tallies: &Tallies, spec: &BinSpec) -> Result<Vec<(usize, usize)>> {
    let slots: Vec<usize> = (0..tallies.settings.len())
        .filter(|&s| tallies.settings[s] != Setting::Number)
        .collect();
    let min = spec.min_occupancy as u64;
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    let mut counts = vec![0u64; slots.len()];
    for b in 0..spec.bins {
        for (c, &s) in counts.iter_mut().zip(&slots) {
            *c += tallies.bins[s][b].count;
        }
        if counts.iter().all(|&c| c >= min) {
            groups.push((start, b + 1));
            start = b + 1;
            counts.iter_mut().for_each(|c| *c = 0);
        }
    }
    if start < spec.bins {
        match groups.last_mut() {
            Some(last) => last.1 = spec.bins,
            None => {
                return Err(Error::InsufficientBinOccupancy {
                    min_occupancy: spec.min_occupancy,
                })
            }
        }
    }
    Ok(groups)
}

fn group_tally(bins: &[BinTally], (lo, hi): (usize, usize)) -> BinTally {
    let mut t = BinTally::default();
    for b in &bins[lo..hi] {
        t.merge(b);
    }
    t
}

/// `Σ_g f_g v_g` with the multinomial delta-method standard error.
fn mixture_variance(groups: &[BinTally], residual: bool) -> Estimate {
    let total: u64 = groups.iter().map(|g| g.count).sum();
    if total == 0 {
        return Estimate {
            value: 0.0,
            stderr: 0.0,
        };
    }
    let n = total as f64;
    let parts: Vec<(f64, f64, f64)> = groups
        .iter()
        .filter(|g| g.count > 0)
        .map(|g| {
            let (var, m4) = g.central_moments();
            let v = if residual { g.residual_variance() } else { var };
            (g.count as f64 / n, v, m4)
        })
        .collect();
    let value: f64 = parts.iter().map(|(f, v, _)| f * v).sum();
    let within: f64 = parts.iter().map(|(f, v, m4)| f * (m4 - v * v).max(0.0)).sum();
    let between: f64 = parts.iter().map(|(f, v, _)| f * (v - value).powi(2)).sum();
    Estimate {
        value,
        stderr: ((within + between) / n).sqrt(),
    }
}

/// `∫ |Σ_j c_j P(x)⟨y_j⟩_x| dx` from per-bin integrals, modelling each
/// weighted mean as linear across the bin group.
fn combination_modulus(
    tallies: &Tallies,
    terms: &[(f64, Setting)],
    groups: &[(usize, usize)],
    spec: &BinSpec,
) -> Estimate {
    let width = spec.width();
    let mut value = 0.0;
    let mut signs = Vec::with_capacity(groups.len());
    for &(lo, hi) in groups {
        let w = (hi - lo) as f64 * width;
        let c = spec.lo + 0.5 * (lo + hi) as f64 * width;
        let (mut a, mut beta) = (0.0, 0.0);
        for &(coef, setting) in terms {
            let slot = tallies.slot(setting);
            let nj = tallies.shots(setting) as f64;
            let g = group_tally(&tallies.bins[slot], (lo, hi));
            a += coef * g.sy / (nj * w);
            beta += coef * 12.0 * (g.sxy - c * g.sy) / (nj * w.powi(3));
        }
        value += abs_linear_integral(a, beta, w);
        signs.push(if a >= 0.0 { 1.0 } else { -1.0 });
    }
    let mut var = 0.0;
    for &(coef, setting) in terms {
        let slot = tallies.slot(setting);
        let nj = tallies.shots(setting) as f64;
        if nj == 0.0 {
            continue;
        }
        let (mut e2, mut es) = (0.0, 0.0);
        for (&range, s) in groups.iter().zip(&signs) {
            let g = group_tally(&tallies.bins[slot], range);
            e2 += g.syy / nj;
            es += s * g.sy / nj;
        }
        var += coef * coef * (e2 - es * es).max(0.0) / nj;
    }
    Estimate {
        value,
        stderr: var.sqrt(),
    }
}

/// `∫_{-w/2}^{w/2} |a + b t| dt`.
fn abs_linear_integral(a: f64, b: f64, w: f64) -> f64 {
    let h = 0.5 * w;
    let root = if b != 0.0 { -a / b } else { f64::INFINITY };
    if root.abs() >= h {
        return (a * w).abs();
    }
    let left = (a * (root + h) + 0.5 * b * (root * root - h * h)).abs();
    let right = (a * (h - root) + 0.5 * b * (h * h - root * root)).abs();
    left + right
}

/// Smallest standard error reported for `E`.
pub const STDERR_FLOOR: f64 = 1e-12;

pub fn estimate_from_tallies(config: &SamplingConfig, tallies: &Tallies) -> Result<SteeringEstimate> {
    let spec = &config.bins;
    let groups = merge_bins(tallies, spec)?;

    let number = &tallies.bins[tallies.slot(Setting::Number)];
    let var_number = mixture_variance(number, false);

    let quad_setting = Setting::for_operator(config.which.operator())?;
    let quad_bins = &tallies.bins[tallies.slot(quad_setting)];
    let quad_groups: Vec<BinTally> = groups.iter().map(|&r| group_tally(quad_bins, r)).collect();
    let var_quadrature_n = mixture_variance(&quad_groups, true);

    let terms: Vec<(f64, Setting)> = protocol_terms(config.n, config.which)?
        .into_iter()
        .map(|(c, kind, _)| Setting::for_operator(kind).map(|s| (c, s)))
        .collect::<Result<_>>()?;
    let commutator_modulus = combination_modulus(tallies, &terms, &groups, spec);

    let (vn, vq, c) = (var_number.value, var_quadrature_n.value, commutator_modulus.value);
    let e_hat = if vn * vq == 0.0 {
        0.0
    } else {
        2.0 * (vn * vq).sqrt() / c
    };
    let rel_n = var_number.stderr / (2.0 * vn.max(var_number.stderr));
    let rel_q = if vq > 0.0 {
        var_quadrature_n.stderr / (2.0 * vq)
    } else {
        0.0
    };
    let rel_c = if c > 0.0 {
        commutator_modulus.stderr / c
    } else {
        0.0
    };
    let rel = if rel_n.is_finite() { rel_n } else { 0.0 };
    let stderr = (e_hat * (rel * rel + rel_q * rel_q + rel_c * rel_c).sqrt()).max(STDERR_FLOOR);

    Ok(SteeringEstimate {
        e_hat,
        stderr,
        shots: config.shots,
        bins: groups.len(),
        var_number,
        var_quadrature_n,
        commutator_modulus,
    })
}

pub fn estimate_steering(config: &SamplingConfig) -> Result<SteeringEstimate> {
    let sim = simulate(config, false)?;
    estimate_from_tallies(config, &sim.tallies)
}
