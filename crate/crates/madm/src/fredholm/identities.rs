//! Kernel identities under the Mobius change of variables
//! `xi = (1 - eta)/(1 - tau eta)`: the auxiliary kernels `K_1`, `K_2`
//! built from `phi`, their determinant identities, and the regularized
//! infinite product `phi_infinity`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::det_id_minus;
use crate::quad::ContourSpec;

use super::kernel::{kernel_k, nystrom_matrix, KernelParams};
use super::two_param::default_xi_radius;

const SINGULARITY_GAP: f64 = 1e-8;

/// `phi(eta) = ((1-eta)/(1-tau eta))^x
///             e^{[1/(1-eta) - 1/(1-tau eta)] t} / (1/tau - eta)`.
pub fn phi(eta: Complex64, kp: &KernelParams) -> Result<Complex64> {
    let tau = kp.params.tau();
    let d1 = 1.0 - eta;
    let d2 = 1.0 - tau * eta;
    let d3 = 1.0 / tau - eta;
    if d1.norm() < SINGULARITY_GAP || d2.norm() < SINGULARITY_GAP || d3.norm() < SINGULARITY_GAP {
        return Err(Error::SingularKernel {
            modulus: d1.norm().min(d2.norm()).min(d3.norm()),
        });
    }
    Ok((d1 / d2).powi(kp.x as i32) * ((1.0 / d1 - 1.0 / d2) * kp.t).exp() / d3)
}

/// `K_2(eta, eta') = phi(eta') / (eta' - tau eta)`.
pub fn kernel_k2(eta: Complex64, eta_p: Complex64, kp: &KernelParams) -> Result<Complex64> {
    let den = eta_p - kp.params.tau() * eta;
    if den.norm() < SINGULARITY_GAP {
        return Err(Error::SingularKernel { modulus: den.norm() });
    }
    Ok(phi(eta_p, kp)? / den)
}

/// Row-symbol kernel `phi(eta) / (eta' - tau eta)`: the image of
/// `K_{x,t}` under the Mobius change of variables. The involution
/// `xi = (1 - eta)/(1 - tau eta)` moves the symbol onto the row
/// variable, so this (not `K_2`, whose symbol sits on the column
/// variable) is the kernel whose Fredholm determinant on an
/// origin-centered `Gamma` reproduces `det(I - lambda K_{x,t})`.
pub fn kernel_row(eta: Complex64, eta_p: Complex64, kp: &KernelParams) -> Result<Complex64> {
    let den = eta_p - kp.params.tau() * eta;
    if den.norm() < SINGULARITY_GAP {
        return Err(Error::SingularKernel { modulus: den.norm() });
    }
    Ok(phi(eta, kp)? / den)
}

/// `K_1(eta, eta') = phi(tau eta) / (eta' - tau eta)`.
pub fn kernel_k1(eta: Complex64, eta_p: Complex64, kp: &KernelParams) -> Result<Complex64> {
    let tau = kp.params.tau();
    let den = eta_p - tau * eta;
    if den.norm() < SINGULARITY_GAP {
        return Err(Error::SingularKernel { modulus: den.norm() });
    }
    Ok(phi(tau * eta, kp)? / den)
}

/// Default radius of the circle `Gamma` for `K_1`, `K_2`: midpoint of
/// `(1, 1/tau)` (star-shaped around 0, with 1 inside and `1/tau`
/// outside).
pub fn default_gamma_radius(tau: f64) -> f64 {
    (1.0 + 1.0 / tau) / 2.0
}

/// A pair of determinants that an identity claims are equal.
#[derive(Debug, Clone, Copy)]
pub struct IdentityEval {
    pub det_a: Complex64,
    pub det_b: Complex64,
    pub deviation: f64,
}

/// Contour-equivalence identity: `det(I - lambda K_{x,t})` on `C_R`
/// against `det(I - lambda Krow)` on `Gamma`, with `Krow` the
/// row-symbol kernel `phi(eta)/(eta' - tau eta)`.
pub fn identity_prop13(kp: &KernelParams, lambda: Complex64, nodes: usize) -> Result<IdentityEval> {
    let tau = kp.params.tau();
    let xi_contour = ContourSpec::new(default_xi_radius(tau), nodes)?;
    let a = nystrom_matrix(&xi_contour, |xi, xi_p| kernel_k(xi, xi_p, kp))?;
    let det_a = det_id_minus(lambda, &a)?;
    let gamma = ContourSpec::new(default_gamma_radius(tau), nodes)?;
    let b = nystrom_matrix(&gamma, |eta, eta_p| kernel_row(eta, eta_p, kp))?;
    let det_b = det_id_minus(lambda, &b)?;
    Ok(IdentityEval {
        det_a,
        det_b,
        deviation: (det_a - det_b).norm(),
    })
}

/// Product identity: `det(I - lambda K_1)` on `Gamma` against
/// `prod_{k>=1} (1 - lambda tau^k)`.
pub fn identity_prop14(kp: &KernelParams, lambda: Complex64, nodes: usize) -> Result<IdentityEval> {
    let tau = kp.params.tau();
    // K_1's only singularity in eta is at 1/tau (through phi(tau eta)),
    // so the trapezoid rate is governed by radius/(1/tau) alone and a
    // circle hugging the unit circle converges fastest (at tau = 0.5 it
    // reaches ~1e-11 already at 64 nodes, vs ~3e-5 at the midpoint
    // radius used for the kernels with a singularity at 1)
    let gamma = ContourSpec::new(1.0 + 0.15 * (1.0 / tau - 1.0), nodes)?;
    let a = nystrom_matrix(&gamma, |eta, eta_p| kernel_k1(eta, eta_p, kp))?;
    let det_a = det_id_minus(lambda, &a)?;
    // |lambda| tau^K < 1e-14
    let k_prod = ((1e-14 / lambda.norm().max(1e-30)).ln() / tau.ln()).ceil().max(1.0) as usize;
    let mut product = Complex64::new(1.0, 0.0);
    let mut tk = 1.0;
    for _ in 0..k_prod {
        tk *= tau;
        product *= 1.0 - lambda * tk;
    }
    Ok(IdentityEval {
        det_a,
        det_b: product,
        deviation: (det_a - product).norm(),
    })
}

/// Depth making the tail of `prod_n (1/tau - tau^n w)`-style ratios
/// deviate from 1 by less than `tol`, for `|w| <= max_abs < 1/tau`.
pub fn product_depth(tau: f64, max_abs: f64, tol: f64) -> Result<usize> {
    let gap = 1.0 / tau - max_abs;
    if gap <= 0.0 {
        return Err(Error::Precondition(format!(
            "product argument modulus {max_abs:.6} reaches the pole ring 1/tau"
        )));
    }
    let mut depth = 0usize;
    let mut tn = 1.0;
    while tn * max_abs / gap > tol * (1.0 - tau) && depth < 1000 {
        tn *= tau;
        depth += 1;
    }
    Ok(depth)
}

/// Regularized product `phi_inf(eta) = prod_{n>=0} phi(tau^n eta)/tau
/// = (1-eta)^x e^{eta t/(1-eta)} prod_{n>=0} (1/tau)/(1/tau - tau^n eta)`.
pub fn phi_infinity(eta: Complex64, kp: &KernelParams) -> Result<Complex64> {
    let tau = kp.params.tau();
    let d1 = 1.0 - eta;
    if d1.norm() < SINGULARITY_GAP {
        return Err(Error::SingularKernel { modulus: d1.norm() });
    }
    let depth = product_depth(tau, eta.norm(), kp.tail_target)?;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut tn = Complex64::new(1.0, 0.0);
    for _ in 0..depth {
        let den = 1.0 / tau - tn * eta;
        if den.norm() < SINGULARITY_GAP {
            return Err(Error::SingularKernel { modulus: den.norm() });
        }
        prod *= (1.0 / tau) / den;
        tn *= tau;
    }
    Ok(d1.powi(kp.x as i32) * ((eta / d1) * kp.t).exp() * prod)
}

/// `phi_n(eta) = prod_{j=0}^{n-1} phi(tau^j eta)
///             = tau^n phi_inf(eta) / phi_inf(tau^n eta)`:
/// the symbol of the n-th power of `K_1`, whose kernel is
/// `phi_n(tau eta) / (eta' - tau^n eta)`.
pub fn phi_n(n: u32, eta: Complex64, kp: &KernelParams) -> Result<Complex64> {
    let tau = kp.params.tau();
    Ok(tau.powi(n as i32) * phi_infinity(eta, kp)? / phi_infinity(tau.powi(n as i32) * eta, kp)?)
}
