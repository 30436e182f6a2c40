//! Quadrature rules: periodic trapezoid nodes on circular contours
//! (spectrally accurate for analytic integrands) and Gauss-Legendre
//! rules for the Airy-kernel determinant.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A circle `|z| = radius` centered at 0, discretized by `nodes`
/// equispaced points, counterclockwise.
///
/// Weights are `z_j / nodes`, which absorbs the `1/(2 pi i)` convention:
/// `(1/2πi) ∮ f(z) dz ≈ Σ_j w_j f(z_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub radius: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Precondition(format!(
                "contour radius must be positive, got {radius}"
            )));
        }
        if nodes < 4 {
            return Err(Error::Precondition(format!(
                "contour needs at least 4 nodes, got {nodes}"
            )));
        }
        Ok(ContourSpec { radius, nodes })
    }

    pub fn node(&self, j: usize) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / (self.nodes as f64);
        Complex64::from_polar(self.radius, theta)
    }

    pub fn weight(&self, j: usize) -> Complex64 {
        self.node(j) / (self.nodes as f64)
    }

    pub fn points(&self) -> Vec<(Complex64, Complex64)> {
        (0..self.nodes).map(|j| (self.node(j), self.weight(j))).collect()
    }

    /// Same circle with twice the node count.
    pub fn refined(&self) -> ContourSpec {
        ContourSpec {
            radius: self.radius,
            nodes: self.nodes * 2,
        }
    }

    /// `(1/2πi) ∮ f(z) dz` by the periodic trapezoid rule.
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        (0..self.nodes)
            .map(|j| self.weight(j) * f(self.node(j)))
            .sum()
    }
}

/// Gauss-Legendre nodes and weights on `(-1, 1)`, by Newton iteration on
/// the Legendre polynomial from the Chebyshev initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        // Newton iteration on P_n(x)
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trapezoid_picks_residues() {
        // (1/2πi) ∮_{|z|=2} dz / (z - 1) = 1
        let c = ContourSpec::new(2.0, 96).unwrap();
        let val = c.integrate(|z| 1.0 / (z - 1.0));
        assert_relative_eq!(val.re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(val.im, 0.0, epsilon = 1e-12);
        // pole outside -> 0
        let val = c.integrate(|z| 1.0 / (z - 3.0));
        assert_relative_eq!(val.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn trapezoid_is_spectrally_accurate() {
        let coarse = ContourSpec::new(1.3, 48).unwrap();
        let fine = coarse.refined();
        let f = |z: Complex64| (z.exp() + 1.0 / z) / (z - 0.5);
        let a = coarse.integrate(f);
        let b = fine.integrate(f);
        assert!((a - b).norm() < 1e-10, "delta {:.3e}", (a - b).norm());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree-15 polynomial x^14 over (-1,1): 2/15
        let approx_val: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(14)).sum();
        assert_relative_eq!(approx_val, 2.0 / 15.0, max_relative = 1e-13);
        let total: f64 = w.iter().sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_legendre_high_order_is_sane() {
        for n in [40, 80] {
            let (x, w) = gauss_legendre(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            assert!(w.iter().all(|&wi| wi > 0.0));
            let total: f64 = w.iter().sum();
            assert_relative_eq!(total, 2.0, max_relative = 1e-13);
        }
    }
}
