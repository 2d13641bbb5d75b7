use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pure two-mode state over the truncated product basis `|n_a⟩|n_b⟩`,
/// `0 ≤ n_a, n_b < dim`, stored row-major in `n_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeKet<T> {
    dim: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> TwoModeKet<T> {
    /// Wraps amplitudes that are already normalised to within `1e-12`.
    pub fn from_amplitudes(dim: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for cutoff {dim}, got {}",
                dim * dim,
                amplitudes.len()
            )));
        }
        let ket = Self { dim, amplitudes };
        let deviation = (ket.norm_sqr() - T::one()).abs();
        if deviation > T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) {
            return Err(Error::InvalidArgument(format!(
                "amplitudes not normalised (|norm² - 1| = {deviation})"
            )));
        }
        Ok(ket)
    }

    /// Product state `|a⟩|b⟩` from single-mode amplitude vectors of equal length.
    pub fn product(a: &[Complex<T>], b: &[Complex<T>]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidArgument(
                "product factors must share a cutoff".into(),
            ));
        }
        let dim = a.len();
        let mut amplitudes = Vec::with_capacity(dim * dim);
        for &x in a {
            for &y in b {
                amplitudes.push(x * y);
            }
        }
        Self::from_amplitudes(dim, amplitudes)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex<T> {
        self.amplitudes[n_a * self.dim + n_b]
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Re-expresses the state on a larger cutoff; the new levels are empty.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::DimTooSmall { dim, n: self.dim - 1 });
        }
        let mut amplitudes = vec![Complex::zero(); dim * dim];
        for a in 0..self.dim {
            for b in 0..self.dim {
                amplitudes[a * dim + b] = self.amplitude(a, b);
            }
        }
        Ok(Self { dim, amplitudes })
    }
}

/// `(|N,0⟩ + e^{iφ}|0,N⟩)/√2` on a cutoff `dim > N`.
pub fn noon_state<T: Scalar>(n: usize, phi: T, dim: usize) -> Result<TwoModeKet<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("NOON states need N >= 1".into()));
    }
    if dim <= n {
        return Err(Error::DimTooSmall { dim, n });
    }
    let half = T::lit(0.5).sqrt();
    let mut amplitudes = vec![Complex::zero(); dim * dim];
    amplitudes[n * dim] = Complex::new(half, T::zero());
    amplitudes[n] = Complex::from_polar(half, phi);
    Ok(TwoModeKet { dim, amplitudes })
}

/// Coherent-state amplitudes `e^{-|α|²/2} αⁿ/√n!`, truncated to `dim` levels
/// and renormalised.
pub fn coherent_amplitudes<T: Scalar>(alpha: Complex<T>, dim: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(dim);
    let mut term = Complex::new(T::one(), T::zero());
    for n in 0..dim {
        if n > 0 {
            term = term * alpha / T::from_usize_lossy(n).sqrt();
        }
        out.push(term);
    }
    let norm: T = out.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    out.iter().map(|&z| z / norm).collect()
}

/// Single-mode Fock state `|n⟩` on `dim` levels.
pub fn fock_amplitudes<T: Scalar>(n: usize, dim: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::zero(); dim];
    out[n] = Complex::new(T::one(), T::zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn n1_phase_zero() {
        let ket = noon_state(1, 0.0, 4).unwrap();
        let h = 0.5f64.sqrt();
        assert!((ket.amplitude(1, 0).re - h).abs() < 1e-15);
        assert!((ket.amplitude(0, 1).re - h).abs() < 1e-15);
        assert!((ket.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn n2_quarter_turn() {
        let ket = noon_state(2, FRAC_PI_2, 5).unwrap();
        let z = ket.amplitude(0, 2);
        assert!(z.re.abs() < 1e-15);
        assert!((z.im - 0.70711).abs() < 1e-5);
    }

    #[test]
    fn cutoff_guard() {
        assert_eq!(
            noon_state(3, 0.0f64, 3).unwrap_err(),
            Error::DimTooSmall { dim: 3, n: 3 }
        );
    }

    #[test]
    fn embedding_preserves_amplitudes() {
        for n in 1..=5 {
            let small = noon_state(n, 0.4, n + 1).unwrap();
            let big = small.embed(n + 6).unwrap();
            let direct = noon_state(n, 0.4, n + 6).unwrap();
            assert_eq!(big, direct);
        }
    }

    #[test]
    fn coherent_product_is_normalised() {
        let a = coherent_amplitudes(Complex::new(0.8, -0.3), 16);
        let b = fock_amplitudes(2, 16);
        let ket: TwoModeKet<f64> = TwoModeKet::product(&a, &b).unwrap();
        assert!((ket.norm_sqr() - 1.0).abs() < 1e-13);
    }
}
