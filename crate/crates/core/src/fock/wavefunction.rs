use num_complex::Complex;

use super::hermite::hermite;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Highest oscillator order the wavefunction routines accept.
pub const MAX_ORDER: usize = 16;

/// Oscillator wavefunction convention: quadrature `X = a + a†` with the
/// positional scale `c = 2`, so that `⟨x|0⟩² = e^{-x²/2}/√(2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WavefunctionConvention;

impl WavefunctionConvention {
    pub const SCALE: f64 = 2.0;

    /// Momentum-representation phase `(-i)^n`, fixed by `P = (a - a†)/i`.
    pub fn momentum_phase<T: Scalar>(n: usize) -> Complex<T> {
        let (re, im) = match n % 4 {
            0 => (1.0, 0.0),
            1 => (0.0, -1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, 1.0),
        };
        Complex::new(T::lit(re), T::lit(im))
    }
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        Err(Error::OutOfSupportedOrder {
            order: n,
            max: MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

/// `⟨x|n⟩ = (√π 2ⁿ n!)^{-1/2} 2^{1/4} c^{-1/2} e^{-x²/c²} H_n(√2 x / c)` at `c = 2`.
pub fn position_wavefunction<T: Scalar>(n: usize, x: T) -> Result<T> {
    check_order(n)?;
    let c = T::lit(WavefunctionConvention::SCALE);
    let mut factorial = T::one();
    for k in 2..=n {
        factorial *= T::from_usize_lossy(k);
    }
    let two = T::lit(2.0);
    let norm = (T::PI().sqrt() * two.powi(n as i32) * factorial).sqrt().recip()
        * two.powf(T::lit(0.25))
        / c.sqrt();
    let y = two.sqrt() * x / c;
    Ok(norm * (-(x * x) / (c * c)).exp() * hermite(n, y))
}

/// `⟨p|n⟩ = (-i)ⁿ ⟨x=p|n⟩`.
pub fn momentum_wavefunction<T: Scalar>(n: usize, p: T) -> Result<Complex<T>> {
    let amplitude = position_wavefunction(n, p)?;
    Ok(WavefunctionConvention::momentum_phase::<T>(n) * amplitude)
}

/// `⟨q_θ|n⟩ = e^{-inθ} ⟨x=q|n⟩` for the rotated quadrature
/// `X_θ = X cos θ + P sin θ`. At `θ = π/2` this is the momentum function.
pub fn quadrature_wavefunction<T: Scalar>(n: usize, theta: T, q: T) -> Result<Complex<T>> {
    let amplitude = position_wavefunction(n, q)?;
    let angle = -(T::from_usize_lossy(n) * theta);
    Ok(Complex::from_polar(amplitude, angle))
}

/// `[⟨x|0⟩, …, ⟨x|max_n⟩]` from the normalised three-term recurrence
/// `x ψ_k = √k ψ_{k-1} + √(k+1) ψ_{k+1}`.
pub fn oscillator_ladder<T: Scalar>(max_n: usize, x: T) -> Result<Vec<T>> {
    check_order(max_n)?;
    let mut out = Vec::with_capacity(max_n + 1);
    let psi0 = (T::lit(2.0) * T::PI()).powf(T::lit(-0.25)) * (-(x * x) / T::lit(4.0)).exp();
    out.push(psi0);
    if max_n >= 1 {
        out.push(x * psi0);
    }
    for k in 1..max_n {
        let kf = T::from_usize_lossy(k);
        let next = (x * out[k] - kf.sqrt() * out[k - 1]) / (kf + T::one()).sqrt();
        out.push(next);
    }
    Ok(out)
}
