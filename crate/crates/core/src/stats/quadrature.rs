//! Adaptive Gauss–Kronrod (7/15) integration on a finite symmetric domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Integration domain `[-L, L]` and refinement controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub half_width: f64,
    pub panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            panels: 24,
            abs_tol: 1e-9,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadratureGrid {
    pub fn with_half_width(half_width: f64) -> Self {
        Self {
            half_width,
            ..Self::default()
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (-self.half_width, self.half_width)
    }

    /// Nodes and weights of the unrefined composite 15-point rule.
    pub fn nodes_weights(&self) -> (Vec<f64>, Vec<f64>) {
        let mut nodes = Vec::with_capacity(15 * self.panels);
        let mut weights = Vec::with_capacity(15 * self.panels);
        for (a, b) in self.panel_edges() {
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            for j in 0..7 {
                nodes.push(c - h * XGK[j]);
                weights.push(h * WGK[j]);
            }
            nodes.push(c);
            weights.push(h * WGK[7]);
            for j in (0..7).rev() {
                nodes.push(c + h * XGK[j]);
                weights.push(h * WGK[j]);
            }
        }
        (nodes, weights)
    }

    fn panel_edges(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.panels.max(1);
        let width = 2.0 * self.half_width / n as f64;
        (0..n).map(move |i| {
            let a = -self.half_width + i as f64 * width;
            let b = if i + 1 == n {
                self.half_width
            } else {
                a + width
            };
            (a, b)
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let s = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

/// Integrates `f` over the grid domain, bisecting the worst segment until the
/// summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
///
/// The final sum runs over segments in position order, so the result does not
/// depend on refinement history beyond the segment set itself.
pub fn integrate<F: Fn(f64) -> f64>(f: F, grid: &QuadratureGrid) -> Result<f64> {
    let mut segments: Vec<Segment> = grid.panel_edges().map(|(a, b)| kronrod(&f, a, b)).collect();
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let tolerance = grid.abs_tol.max(grid.rel_tol * value.abs());
        if !value.is_finite() {
            return Err(Error::ConvergenceFailure {
                intervals: segments.len(),
                error: f64::INFINITY,
                tolerance,
            });
        }
        if error <= tolerance {
            segments.sort_by(|l, r| l.a.total_cmp(&r.a));
            return Ok(segments.iter().map(|s| s.value).sum());
        }
        if segments.len() >= grid.max_intervals {
            return Err(Error::ConvergenceFailure {
                intervals: segments.len(),
                error,
                tolerance,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|l, r| l.1.error.total_cmp(&r.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(kronrod(&f, s.a, mid));
        segments.push(kronrod(&f, mid, s.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn gaussian() {
        let v = integrate(|x| (-x * x / 2.0).exp(), &QuadratureGrid::default()).unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn fixed_nodes_reproduce_gaussian() {
        let (x, w) = QuadratureGrid::default().nodes_weights();
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x / 2.0).exp()).sum();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-10);
        assert_eq!(x.len(), 15 * 24);
    }

    #[test]
    fn high_degree_gaussian_moment() {
        // ∫ x^24 e^{-x²/2} = 23!! √(2π)
        let dfact: f64 = (1..=23).step_by(2).map(|k| k as f64).product();
        let v = integrate(|x| x.powi(24) * (-x * x / 2.0).exp(), &QuadratureGrid::with_half_width(20.0)).unwrap();
        assert!(((v - dfact * (2.0 * PI).sqrt()) / v).abs() < 1e-11);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let v = integrate(|x| x.powi(3) * (-x * x / 2.0).exp(), &QuadratureGrid::default()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn kink_integrand() {
        // ∫|ψ0 ψ2| = ∫ e^{-x²/2}|x²-1| / (2√π) = 2/√(eπ)
        let f = |x: f64| (-x * x / 2.0).exp() * (x * x - 1.0).abs() / (2.0 * PI.sqrt());
        let v = integrate(f, &QuadratureGrid::default()).unwrap();
        assert!((v - 2.0 / (E * PI).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn stalls_report_failure() {
        let grid = QuadratureGrid {
            max_intervals: 30,
            ..QuadratureGrid::default()
        };
        let err = integrate(|x| if x > 0.123 { 1.0 } else { 0.0 }, &grid).unwrap_err();
        assert!(matches!(err, Error::ConvergenceFailure { .. }));
    }
}
