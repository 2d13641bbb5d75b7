//! Oracles shared by the integration tests.

#![allow(dead_code)]

use noon_steering::fock::{coherent_amplitudes, fock_amplitudes, TwoModeKet};
use noon_steering::linalg::CMatrix;
use noon_steering::lossy::TwoModeDensity;
use noon_steering::{Complex, Density, Ket};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Loss applied to a pure two-mode ket by explicit beam splitters with vacuum
/// environments, followed by the partial trace over both environments.
///
/// `|n⟩|0⟩_env → Σ_k √C(n,k) t^k r^{n-k} |k⟩|n-k⟩_env`, `t = √η`, `r = √(1-η)`.
pub fn beam_splitter_density(ket: &Ket, eta_a: f64, eta_b: f64) -> Density {
    let d = ket.dim();
    let split = |n: usize, k: usize, eta: f64| -> f64 {
        binomial(n, k).sqrt() * eta.sqrt().powi(k as i32) * (1.0 - eta).sqrt().powi((n - k) as i32)
    };
    // amplitudes[(a, b, ea, eb)] with ea, eb the environment photon numbers
    let idx = |a: usize, b: usize, ea: usize, eb: usize| ((a * d + b) * d + ea) * d + eb;
    let mut four = vec![Complex::new(0.0, 0.0); d * d * d * d];
    for na in 0..d {
        for nb in 0..d {
            let c = ket.amplitude(na, nb);
            if c.norm() == 0.0 {
                continue;
            }
            for ka in 0..=na {
                for kb in 0..=nb {
                    let w = split(na, ka, eta_a) * split(nb, kb, eta_b);
                    four[idx(ka, kb, na - ka, nb - kb)] += c * w;
                }
            }
        }
    }
    let rho = CMatrix::from_fn(d * d, |i, j| {
        let (a, b) = (i / d, i % d);
        let (a2, b2) = (j / d, j % d);
        let mut acc = Complex::new(0.0, 0.0);
        for ea in 0..d {
            for eb in 0..d {
                acc += four[idx(a, b, ea, eb)] * four[idx(a2, b2, ea, eb)].conj();
            }
        }
        acc
    });
    TwoModeDensity::from_matrix(d, rho).expect("matching cutoff")
}

/// NOON ket written out directly from its definition.
pub fn noon_ket_direct(n: usize, phi: f64, dim: usize) -> Ket {
    let mut amps = vec![Complex::new(0.0, 0.0); dim * dim];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    amps[n * dim] = Complex::new(s, 0.0);
    amps[n] = Complex::from_polar(s, phi);
    TwoModeKet::from_amplitudes(dim, amps).expect("normalised")
}

pub const SEPARABLE_DIM: usize = 14;

fn random_local<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex> {
    if rng.random_bool(0.3) {
        fock_amplitudes(rng.random_range(0..3), dim)
    } else {
        let r = rng.random_range(0.1..1.2);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        coherent_amplitudes(Complex::from_polar(r, theta), dim)
    }
}

/// `count` separable states from a fixed seed: products of coherent or Fock
/// states and finite mixtures of such products.
pub fn separable_states(count: usize, seed: u64) -> Vec<Density> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = SEPARABLE_DIM;
    (0..count)
        .map(|i| {
            let components = if i % 2 == 0 { 1 } else { rng.random_range(2..=3) };
            let parts: Vec<(f64, Density)> = (0..components)
                .map(|_| {
                    let a = random_local(&mut rng, d);
                    let b = random_local(&mut rng, d);
                    let ket = TwoModeKet::product(&a, &b).expect("normalised factors");
                    (rng.random_range(0.2..1.0), TwoModeDensity::from_ket(&ket))
                })
                .collect();
            TwoModeDensity::mixture(&parts).expect("compatible components")
        })
        .collect()
}
