//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{beam_splitter_density, noon_ket_direct, separable_states};
use noon_steering::fock::OperatorKind;
use noon_steering::lossy::LossChannel;
use noon_steering::sampling::{estimate_steering, simulate, write_shot_log, SamplingConfig};
use noon_steering::stats::{
    inferred_commutator_modulus, inferred_number_variance, inferred_variance_quadrature,
    DensityInference, NoonInference, Which,
};
use noon_steering::steering::{
    coherence_inequality, default_phase, e1p_closed_form, protocol_rhs, steering_functional,
    threshold_efficiency, ThresholdMode,
};
use noon_steering::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn close(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn ideal() -> LossChannel<f64> {
    LossChannel::lossless()
}

fn ch(a: f64, b: f64) -> LossChannel<f64> {
    LossChannel::new(a, b).expect("valid efficiencies")
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let mean_x = inferred_commutator_modulus(1, 0.0, ideal(), Which::P)?;
    let var_p = inferred_variance_quadrature(1, 0.0, ideal(), Which::P)?;
    let elapsed = start.elapsed();
    let pass = close(mean_x, (2.0 / PI).sqrt(), 1e-5)
        && close(var_p, 2.0, 1e-5)
        && elapsed < Duration::from_secs(1);
    check(
        pass,
        format!(
            "|<X_b>|_inf = {mean_x:.7} (0.797885 ± 1e-5), Var_inf P_b = {var_p:.7} (2 ± 1e-5), {:.1} ms",
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_2() -> Result<Outcome> {
    let vx = inferred_variance_quadrature(2, FRAC_PI_2, ideal(), Which::X)?;
    let vp = inferred_variance_quadrature(2, FRAC_PI_2, ideal(), Which::P)?;
    let pass = close(vx, 10.1351, 1e-3) && close(vx.sqrt(), 3.18356, 1e-4) && close(vx, vp, 1e-8);
    check(
        pass,
        format!(
            "Var_inf X^2 = {vx:.6} (10.1351 ± 1e-3), sd = {:.6} (3.18356 ± 1e-4), |X - P| = {:.1e} (< 1e-8)",
            vx.sqrt(),
            (vx - vp).abs()
        ),
    )
}

fn criterion_3() -> Result<Outcome> {
    let commutators = [(2, 1.93577, 1e-3), (3, 4.53, 1e-2), (4, 11.2024, 1e-3), (5, 29.5504, 1e-2)];
    let variances = [(3, 477.081), (4, 10982.8), (5, 795639.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, target, tol) in commutators {
        let c = inferred_commutator_modulus(n, default_phase(n), ideal(), Which::P)?;
        pass &= close(c, target, tol);
        parts.push(format!("C{n} = {c:.5}"));
    }
    for (n, target) in variances {
        let v = inferred_variance_quadrature(n, default_phase(n), ideal(), Which::X)?;
        pass &= close(v, target, 1e-3 * target);
        parts.push(format!("V{n} = {v:.3}"));
    }
    check(pass, parts.join(", "))
}

fn criterion_4() -> Result<Outcome> {
    let etas: Vec<f64> = (0..9).map(|i| (0.6 + 0.05 * i as f64).min(1.0)).collect();
    let mut worst: f64 = 0.0;
    for &a in &etas {
        for &b in &etas {
            let c = ch(a, b);
            let numeric = steering_functional(1, 0.0, c, Which::P)?.e;
            worst = worst.max((numeric - e1p_closed_form(c)?).abs());
        }
    }
    check(worst < 1e-6, format!("max |dE| = {worst:.2e} over 9x9 grid (< 1e-6)"))
}

fn criterion_5() -> Result<Outcome> {
    let mut thresholds = Vec::new();
    for n in 1..=4 {
        thresholds.push(threshold_efficiency(n, default_phase(n), Which::P, ThresholdMode::Symmetric)?);
    }
    let increasing = thresholds.windows(2).all(|w| w[1] > w[0]);
    let pass = close(thresholds[0], 0.917, 0.005) && close(thresholds[1], 0.94, 0.01) && increasing;
    let list: Vec<String> = thresholds.iter().map(|t| format!("{t:.6}")).collect();
    check(
        pass,
        format!("eta* N=1..4 = [{}] (0.917 ± 0.005, 0.94 ± 0.01, increasing)", list.join(", ")),
    )
}

fn criterion_6() -> Result<Outcome> {
    let e_a = steering_functional(2, FRAC_PI_2, ch(0.9, 1.0), Which::P)?.e;
    let e_b = steering_functional(2, FRAC_PI_2, ch(1.0, 0.9), Which::P)?.e;
    check(e_a < e_b, format!("E(0.90, 1.00) = {e_a:.6} < E(1.00, 0.90) = {e_b:.6}"))
}

fn criterion_7() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let phi = default_phase(n);
        let rhs = protocol_rhs(n, phi, ideal())?;
        let c = inferred_commutator_modulus(n, phi, ideal(), Which::P)?;
        worst = worst.max((rhs - c / 2.0).abs());
    }
    check(worst < 1e-6, format!("max |rhs - C/2| = {worst:.2e} for N = 1, 2, 3 (< 1e-6)"))
}

fn criterion_8() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (eta, expect) in [(1.0, true), (0.99, true), (0.5, false)] {
        let r = coherence_inequality(2, FRAC_PI_2, LossChannel::symmetric(eta)?, Which::P)?;
        pass &= r.violated == expect && close(r.p1 + r.p2, 1.0, 1e-12);
        parts.push(format!(
            "eta={eta}: lhs={:.4} rhs={:.4} violated={}",
            r.lhs, r.rhs, r.violated
        ));
    }
    check(pass, parts.join("; "))
}

fn criterion_9() -> Result<Outcome> {
    let states = separable_states(20, 2024);
    let mut min_margin = f64::INFINITY;
    for rho in states {
        let inf = DensityInference::new(rho)?;
        let vn = inf.inferred_number_variance();
        let vp = inf.inferred_variance(OperatorKind::P, 1)?;
        let c = inf.inferred_commutator(OperatorKind::P, 1)?;
        min_margin = min_margin.min(vn * vp - c * c / 4.0);
    }
    check(
        min_margin >= -1e-9,
        format!("20 separable states, min(Vn Vp - C^2/4) = {min_margin:.3e} (>= 0)"),
    )
}

fn criterion_10() -> Result<Outcome> {
    let etas = [1.0, 0.9, 0.7];
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let phi = default_phase(n);
        for &a in &etas {
            for &b in &etas {
                let channel = ch(a, b);
                let oracle = DensityInference::new(beam_splitter_density(&noon_ket_direct(n, phi, n + 1), a, b))?;
                let engine = NoonInference::new(n, phi, channel)?;
                worst = worst.max((oracle.inferred_number_variance() - inferred_number_variance(n, channel)).abs());
                for which in [Which::X, Which::P] {
                    let kind = which.operator();
                    let v = engine.inferred_variance(kind)?;
                    worst = worst.max((oracle.inferred_variance(kind, n)? - v).abs() / v.max(1.0));
                    worst = worst.max((oracle.inferred_commutator(kind, n)? - engine.commutator_modulus(kind)?).abs());
                }
            }
        }
    }
    check(worst < 1e-6, format!("max deviation = {worst:.2e} for N <= 3, eta in {{1, 0.9, 0.7}}^2 (< 1e-6)"))
}

fn criterion_11() -> Result<Outcome> {
    let start = Instant::now();
    let seeds = 10u64;
    let shots = 1_000_000;
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, phi) in [(1usize, 0.0), (2, FRAC_PI_2)] {
        let exact = steering_functional(n, phi, ideal(), Which::P)?;
        let truth = [exact.var_number, exact.var_quadrature_n, exact.commutator_modulus, exact.e];
        let mut mean = [0.0; 4];
        let mut se = [0.0; 4];
        for seed in 0..seeds {
            let e = estimate_steering(&SamplingConfig::new(n, phi, ideal(), Which::P, shots, seed))?;
            let values = [e.var_number, e.var_quadrature_n, e.commutator_modulus];
            for (k, v) in values.iter().enumerate() {
                mean[k] += v.value / seeds as f64;
                se[k] += v.stderr / seeds as f64;
            }
            mean[3] += e.e_hat / seeds as f64;
            se[3] += e.stderr / seeds as f64;
        }
        let mut worst_z: f64 = 0.0;
        for k in 0..4 {
            let sem = se[k] / (seeds as f64).sqrt();
            let dev = (mean[k] - truth[k]).abs();
            pass &= dev <= 4.0 * sem;
            if sem > 0.0 {
                worst_z = worst_z.max(dev / sem);
            }
        }
        parts.push(format!(
            "N={n}: Vq={:.4} C={:.4} E={:.1e} max z={worst_z:.2}",
            mean[1], mean[2], mean[3]
        ));
    }

    let config = SamplingConfig::new(2, FRAC_PI_2, LossChannel::symmetric(0.95)?, Which::P, 100_000, 7);
    let log = |c: &SamplingConfig| -> Result<Vec<u8>> {
        let sim = simulate(c, true)?;
        let mut buf = Vec::new();
        write_shot_log(sim.records.as_deref().unwrap_or_default(), &mut buf)
            .map_err(|e| noon_steering::Error::InvalidArgument(e.to_string()))?;
        Ok(buf)
    };
    let identical = log(&config)? == log(&config)?;
    let repeat = estimate_steering(&config)? == estimate_steering(&config)?;
    pass &= identical && repeat;

    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    parts.push(format!("byte-identical replay={}, {:.1} s", identical && repeat, elapsed.as_secs_f64()));
    check(pass, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 11] = [
        ("N=1 ideal pipeline", criterion_1),
        ("N=2 variance values", criterion_2),
        ("higher-N commutators and variances", criterion_3),
        ("N=1 closed form vs numerics", criterion_4),
        ("efficiency thresholds", criterion_5),
        ("eta_b sensitivity at N=2", criterion_6),
        ("homodyne protocol equivalence", criterion_7),
        ("coherence inequality", criterion_8),
        ("separable states never steer", criterion_9),
        ("matrix oracle equivalence", criterion_10),
        ("sampler consistency and replay", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!("[{}] {:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
