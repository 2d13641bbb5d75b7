mod common;

use std::f64::consts::FRAC_PI_2;

use common::{beam_splitter_density, noon_ket_direct};
use nalgebra::DMatrix;
use noon_steering::fock::OperatorKind;
use noon_steering::lossy::{lossy_noon_density, LossChannel};
use noon_steering::stats::{DensityInference, NoonInference, Which};
use noon_steering::{Complex, Density};

const ETAS: [f64; 3] = [1.0, 0.9, 0.7];

fn min_eigenvalue(rho: &Density) -> f64 {
    let m = rho.matrix();
    let d = m.dim();
    let dense = DMatrix::<num_complex::Complex<f64>>::from_fn(d, d, |i, j| m[(i, j)]);
    dense
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn loss_model_matches_beam_splitter_construction() {
    for n in 1..=4 {
        for &(a, b) in &[(1.0, 1.0), (0.5, 1.0), (0.3, 0.8), (0.0, 0.6)] {
            let phi = 0.37 * n as f64;
            let dim = n + 2;
            let direct = beam_splitter_density(&noon_ket_direct(n, phi, dim), a, b);
            let closed = lossy_noon_density(n, phi, LossChannel::new(a, b).unwrap(), dim).unwrap();
            assert!(direct.matrix().max_abs_diff(closed.matrix()) < 1e-12, "N={n} a={a} b={b}");
        }
    }
}

#[test]
fn lossy_density_eigenvalues_nonnegative() {
    let grid = [0.0, 0.3, 0.7, 1.0];
    for n in 1..=4 {
        for &a in &grid {
            for &b in &grid {
                let rho = lossy_noon_density(n, 1.1, LossChannel::new(a, b).unwrap(), n + 1).unwrap();
                assert!(min_eigenvalue(&rho) >= -1e-10);
            }
        }
    }
}

#[test]
fn closed_path_matches_explicit_densities() {
    for n in 1..=3 {
        let phi = if n % 2 == 1 { 0.0 } else { FRAC_PI_2 };
        for &a in &ETAS {
            for &b in &ETAS {
                let channel = LossChannel::new(a, b).unwrap();
                let rho = beam_splitter_density(&noon_ket_direct(n, phi, n + 1), a, b);
                let oracle = DensityInference::new(rho).unwrap();
                let engine = NoonInference::new(n, phi, channel).unwrap();

                for &x in &[-2.2, 0.0, 0.9] {
                    assert!((oracle.px_density(x) - engine.px_density(x)).abs() < 1e-12);
                }
                let vn = oracle.inferred_number_variance();
                let vn_closed = noon_steering::stats::inferred_number_variance(n, channel);
                assert!((vn - vn_closed).abs() < 1e-12);

                for which in [Which::X, Which::P] {
                    let kind = which.operator();
                    let v = oracle.inferred_variance(kind, n).unwrap();
                    let v_closed = engine.inferred_variance(kind).unwrap();
                    assert!((v - v_closed).abs() < 1e-6 * v_closed.max(1.0), "N={n} {which} var");
                    let c = oracle.inferred_commutator(kind, n).unwrap();
                    let c_closed = engine.commutator_modulus(kind).unwrap();
                    assert!((c - c_closed).abs() < 1e-6, "N={n} {which} commutator");
                }
            }
        }
    }
}

#[test]
fn conditional_moments_match_explicit_densities() {
    let channel = LossChannel::new(0.9, 0.7).unwrap();
    for n in 1..=3 {
        let rho = beam_splitter_density(&noon_ket_direct(n, 0.6, n + 1), 0.9, 0.7);
        let oracle = DensityInference::new(rho).unwrap();
        let engine = NoonInference::new(n, 0.6, channel).unwrap();
        for kind in [OperatorKind::X, OperatorKind::P, OperatorKind::Quadrature(0.8)] {
            for power in [n, 2 * n] {
                for &x in &[-1.0, 0.4, 2.0] {
                    let m = oracle.conditional_moment(kind, power, x).unwrap();
                    let m_closed = engine.conditional_moment(kind, power, x).unwrap();
                    assert!((m - m_closed).abs() < 1e-10 * m_closed.abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn conditional_state_is_a_density() {
    let channel = LossChannel::new(0.8, 0.6).unwrap();
    let x = 0.7;
    let rho = noon_steering::lossy::conditional_density_given_x(3, 0.2, channel, x).unwrap();
    let m = rho.matrix();
    let dense = DMatrix::<num_complex::Complex<f64>>::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)]);
    assert!(dense.symmetric_eigenvalues().iter().all(|&l| l >= -1e-10));
    let trace: Complex = (0..m.dim()).map(|i| m[(i, i)]).sum();
    assert!((trace.re - 1.0).abs() < 1e-10);
}
