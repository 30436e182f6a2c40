//! One-parameter mu-contour representation: the bilateral series
//! `f(mu, z)`, the exponent weight, the resolvent kernel `J` with its
//! zeta integral, and the outer mu-contour probability formula.
//!
//! The kernel implemented here is derived from the resolvent expansion
//! of the eta-contour kernels: with `phi` the one-parameter symbol and
//! `K_1(eta, eta') = phi(tau eta)/(eta' - tau eta)`, the Neumann series
//! of `(I - lambda K_1)^{-1}` telescopes through `phi_infinity`, and
//! the determinant ratio
//! `det(I - lambda K) / prod_{k>=1}(1 - lambda tau^k)` (with
//! `lambda = tau^{-m} mu`) becomes `det(I + mu J)` for the explicit
//! `J` below. The identity is checked directly by the
//! `det_matches_kernel_ratio_identity` test.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::QueryPoint;
use crate::linalg::{det_id_minus, CMatrix};
use crate::params::ModelParams;
use crate::quad::ContourSpec;

use super::identities::{phi, phi_infinity};
use super::kernel::{self, KernelParams};
use super::two_param::{ProbEval, IMAG_RESIDUAL_LIMIT};

/// Node counts for the one-parameter formula.
#[derive(Debug, Clone, Copy)]
pub struct OneParamQuad {
    pub eta_nodes: usize,
    pub zeta_nodes: usize,
    pub mu_nodes: usize,
}

impl Default for OneParamQuad {
    fn default() -> Self {
        OneParamQuad {
            eta_nodes: 288,
            zeta_nodes: 64,
            mu_nodes: 96,
        }
    }
}

/// The eta integrand carries a factor `eta^{-x-1}` that steepens on the
/// (radius > 1) contour as `x` decreases, slowing the trapezoid's
/// geometric convergence; pad the node count per site below zero. The
/// rate is calibrated empirically at tau <= 0.6 (64 extra nodes per
/// site keep the quadrature error below the kernel's truncation floor).
fn eta_nodes_for(base: usize, x: i64) -> usize {
    base + 64 * (-x).max(0) as usize
}

/// Default eta-contour radius: midpoint of `(1, 1/tau)`, keeping `1`
/// inside and `1/tau` outside.
pub fn default_eta_radius(tau: f64) -> f64 {
    (1.0 + 1.0 / tau) / 2.0
}

/// Default zeta-contour radius: midpoint of `(tau r, r)` for the
/// default eta radius `r`, so the zeta contour separates the geometric
/// ladder poles (inside) from the eta nodes (outside).
pub fn default_zeta_radius(tau: f64) -> f64 {
    default_eta_radius(tau) * (tau + 1.0) / 2.0
}

/// Default mu-contour radius: geometric mean of the pole rings at `1`
/// and `1/tau`, balancing the trapezoid decay rates toward both.
pub fn default_mu_radius(tau: f64) -> f64 {
    (1.0 / tau).sqrt()
}

/// Truncation depths `(k_plus, k_minus)` for `f(mu, z)`: both
/// geometric tails (ratio `tau |z|` upward, `1/|z|` downward) below
/// `tol`.
pub fn f_truncation(tau: f64, abs_z: f64, abs_mu: f64, tol: f64) -> (usize, usize) {
    let bound = |ratio: f64, scale: f64| -> usize {
        let target = tol * (1.0 - ratio) / scale;
        (target.ln() / ratio.ln()).ceil().max(1.0) as usize
    };
    let up = bound(tau * abs_z, 2.0);
    let down = bound(1.0 / abs_z, 2.0 * (1.0 + 1.0 / abs_mu));
    (up, down)
}

/// Bilateral series `f(mu, z) = sum_k tau^k z^k / (1 - tau^k mu)`,
/// truncated symmetrically by the geometric tail rule. Requires
/// `1 < |z| < 1/tau` and `mu` away from every pole `tau^{-k}`.
pub fn f_sum(mu: Complex64, z: Complex64, tau: f64, tol: f64) -> Result<Complex64> {
    let abs_z = z.norm();
    if abs_z <= 1.0 || abs_z >= 1.0 / tau {
        return Err(Error::Precondition(format!(
            "|z| = {abs_z:.6} outside the convergence annulus (1, {:.6})",
            1.0 / tau
        )));
    }
    let (k_plus, k_minus) = f_truncation(tau, abs_z, mu.norm().max(1e-300), tol);
    f_sum_with_depth(mu, z, tau, k_plus, k_minus)
}

/// `f_sum` at explicit truncation depths (shared by the stability test).
pub fn f_sum_with_depth(
    mu: Complex64,
    z: Complex64,
    tau: f64,
    k_plus: usize,
    k_minus: usize,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    // k >= 0: tau^k z^k / (1 - tau^k mu)
    let mut tz = Complex64::new(1.0, 0.0);
    let mut tk = 1.0;
    for _ in 0..=k_plus {
        let den = 1.0 - tk * mu;
        if den.norm() < 1e-8 {
            return Err(Error::SingularKernel { modulus: den.norm() });
        }
        sum += tz / den;
        tz *= tau * z;
        tk *= tau;
    }
    // k = -j < 0: tau^{-j} z^{-j} / (1 - tau^{-j} mu) = z^{-j} / (tau^j - mu)
    let z_inv = 1.0 / z;
    let mut zp = Complex64::new(1.0, 0.0);
    let mut tj = 1.0;
    for _ in 1..=k_minus {
        zp *= z_inv;
        tj *= tau;
        let den = tj - mu;
        if den.norm() < 1e-8 {
            return Err(Error::SingularKernel { modulus: den.norm() });
        }
        sum += zp / den;
    }
    Ok(sum)
}

/// `exp(Lambda_{t,m,x}(zeta) - Lambda_{t,m,x}(eta'))`, computed
/// branch-free via integer powers:
/// `((1-zeta)/(1-eta'))^x e^{(zeta/(1-zeta) - eta'/(1-eta')) t}
///  (zeta/eta')^m`.
pub fn lambda_weight(zeta: Complex64, eta_p: Complex64, kp: &KernelParams) -> Complex64 {
    let ratio = (1.0 - zeta) / (1.0 - eta_p);
    let exponent = (zeta / (1.0 - zeta) - eta_p / (1.0 - eta_p)) * kp.t;
    ratio.powi(kp.x as i32) * exponent.exp() * (zeta / eta_p).powi(kp.m as i32)
}

/// Geometric ladder `sum_{j>=0} base^j / (1 - mu tau^{j+1-m})`: the
/// resummed generating series of the resolvent powers, analytic in mu
/// away from the poles `tau^{m-1-j}`. Requires `|base| < 1`.
fn ladder_sum(mu: Complex64, base: Complex64, tau: f64, m: u32, tol: f64) -> Result<Complex64> {
    let ratio = base.norm();
    if ratio >= 1.0 {
        return Err(Error::Precondition(format!(
            "ladder ratio {ratio:.6} is not a contraction; the zeta \
             contour must stay outside tau times the eta contour"
        )));
    }
    let tp0 = tau.powi(1 - m as i32);
    if !tp0.is_finite() {
        return Err(Error::Precondition(format!(
            "tau^{{1-m}} overflows at m = {m}"
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    let mut tp = tp0;
    for _ in 0..4000 {
        let den = 1.0 - mu * tp;
        if den.norm() < 1e-8 {
            return Err(Error::SingularKernel { modulus: den.norm() });
        }
        sum += pw / den;
        pw *= base;
        tp *= tau;
        if pw.norm() * 4.0 < tol * (1.0 - ratio) {
            return Ok(sum);
        }
    }
    Err(Error::NotConverged(format!(
        "geometric ladder tail {:.3e} after 4000 terms",
        pw.norm()
    )))
}

/// Row factor `-tau^{-m} (phi(eta) - phi(tau eta)) phi_infinity(tau^2
/// eta)` of the resolvent kernel.
fn row_factor(eta: Complex64, kp: &KernelParams) -> Result<Complex64> {
    let tau = kp.params.tau();
    let scale = -tau.powi(-(kp.m as i32));
    Ok(scale * (phi(eta, kp)? - phi(tau * eta, kp)?) * phi_infinity(tau * tau * eta, kp)?)
}

/// Resolvent kernel `J(eta, eta')`: the zeta-contour integral of the
/// geometric ladder against `1 / (phi_infinity(tau zeta) (eta' -
/// zeta))`, scaled by the row factor. The eta contour must keep `1`
/// inside and `1/tau` outside; the zeta contour must lie strictly
/// between `tau |eta|` and `|eta'|`.
pub fn kernel_j(
    eta: Complex64,
    eta_p: Complex64,
    mu: Complex64,
    kp: &KernelParams,
    zeta_contour: &ContourSpec,
) -> Result<Complex64> {
    let tau = kp.params.tau();
    let u = row_factor(eta, kp)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (zeta, w) in zeta_contour.points() {
        let s = ladder_sum(mu, tau * eta / zeta, tau, kp.m, kp.tail_target)? / zeta;
        sum += w * s / (phi_infinity(tau * zeta, kp)? * (eta_p - zeta));
    }
    Ok(u * sum)
}

/// Discretized `J` on the eta contour: `A_{ik} = J(eta_i, eta_k) w_k`.
/// Factors the zeta sum through an intermediate matrix so the build
/// costs `O(me mz (me + depth))`.
pub fn j_matrix(
    mu: Complex64,
    kp: &KernelParams,
    eta_contour: &ContourSpec,
    zeta_contour: &ContourSpec,
) -> Result<CMatrix> {
    let tau = kp.params.tau();
    let me = eta_contour.nodes;
    let mz = zeta_contour.nodes;
    if eta_contour.radius <= 1.0 || eta_contour.radius >= 1.0 / tau {
        return Err(Error::Precondition(format!(
            "eta radius {:.6} outside (1, 1/tau)",
            eta_contour.radius
        )));
    }
    if zeta_contour.radius <= tau * eta_contour.radius
        || zeta_contour.radius >= eta_contour.radius
    {
        return Err(Error::Precondition(format!(
            "zeta radius {:.6} outside (tau r, r) for eta radius {:.6}",
            zeta_contour.radius, eta_contour.radius
        )));
    }
    let eta: Vec<Complex64> = (0..me).map(|i| eta_contour.node(i)).collect();
    let zeta: Vec<Complex64> = (0..mz).map(|j| zeta_contour.node(j)).collect();
    let u: Vec<Complex64> = eta
        .iter()
        .map(|&e| row_factor(e, kp))
        .collect::<Result<_>>()?;
    // zeta-side factor including the zeta weight and the 1/zeta measure
    let q: Vec<Complex64> = (0..mz)
        .map(|j| {
            Ok(zeta_contour.weight(j) / (zeta[j] * phi_infinity(tau * zeta[j], kp)?))
        })
        .collect::<Result<_>>()?;
    // intermediate T_{ij} = q_j ladder(mu, tau eta_i / zeta_j)
    let mut t = vec![Complex64::new(0.0, 0.0); me * mz];
    for i in 0..me {
        for j in 0..mz {
            t[i * mz + j] =
                q[j] * ladder_sum(mu, tau * eta[i] / zeta[j], tau, kp.m, kp.tail_target)?;
        }
    }
    let mut out = CMatrix::zeros(me);
    for k in 0..me {
        let wk = eta_contour.weight(k);
        // Cauchy column 1/(eta_k - zeta_j)
        let cauchy: Vec<Complex64> = (0..mz).map(|j| 1.0 / (eta[k] - zeta[j])).collect();
        for i in 0..me {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..mz {
                acc += t[i * mz + j] * cauchy[j];
            }
            out.set(i, k, u[i] * acc * wk);
        }
    }
    Ok(out)
}

/// `P(x_m(t/gamma) <= x)` via the one-parameter mu-contour formula:
/// the mu integral of `prod_{k>=1} (1 - mu tau^k) det(I + mu J) / mu`.
pub fn prob_one_param(
    qp: &QueryPoint,
    params: &ModelParams,
    quad: &OneParamQuad,
) -> Result<ProbEval> {
    prob_one_param_with_tail(qp, params, quad, kernel::TAIL_TARGET)
}

/// [`prob_one_param`] with an explicit truncation target for the
/// series/product/ladder tails.
pub fn prob_one_param_with_tail(
    qp: &QueryPoint,
    params: &ModelParams,
    quad: &OneParamQuad,
    tail_target: f64,
) -> Result<ProbEval> {
    if !params.is_one_param() {
        return Err(Error::InvalidParameter(
            "one-parameter formula needs p = u".into(),
        ));
    }
    if quad.eta_nodes < 8 || quad.zeta_nodes < 8 || quad.mu_nodes < 8 {
        return Err(Error::Precondition("need at least 8 nodes".into()));
    }
    let (value, depth) = integral(
        qp,
        params,
        quad.eta_nodes,
        quad.zeta_nodes,
        quad.mu_nodes,
        tail_target,
    )?;
    // refine against 3/4 resolution: the trapezoid error is geometric
    // in the node count, so a converged value moves below the kernel's
    // truncation floor already at the coarser rule, while an
    // unconverged one shows a large delta
    let (coarse, _) = integral(
        qp,
        params,
        3 * quad.eta_nodes / 4,
        3 * quad.zeta_nodes / 4,
        3 * quad.mu_nodes / 4,
        tail_target,
    )?;
    let imag_residual = value.im.abs();
    if imag_residual > IMAG_RESIDUAL_LIMIT {
        return Err(Error::ResidualTooLarge {
            kind: "one-param imaginary".into(),
            value: imag_residual,
            limit: IMAG_RESIDUAL_LIMIT,
        });
    }
    Ok(ProbEval {
        prob: value.re,
        imag_residual,
        refine_delta: (value - coarse).norm(),
        node_counts: vec![quad.eta_nodes, quad.zeta_nodes, quad.mu_nodes],
        truncation_depths: vec![depth],
    })
}

fn integral(
    qp: &QueryPoint,
    params: &ModelParams,
    eta_nodes: usize,
    zeta_nodes: usize,
    mu_nodes: usize,
    tail_target: f64,
) -> Result<(Complex64, usize)> {
    let tau = params.tau();
    let kp = KernelParams::new(qp.x, qp.t, qp.m, *params).with_tail_target(tail_target)?;
    let eta_contour = ContourSpec::new(default_eta_radius(tau), eta_nodes_for(eta_nodes, qp.x))?;
    let zeta_contour = ContourSpec::new(default_zeta_radius(tau), zeta_nodes)?;
    let mu_contour = ContourSpec::new(default_mu_radius(tau), mu_nodes)?;
    // prefactor depth: |mu| tau^K < 1e-14
    let k_prod = ((1e-14 / mu_contour.radius).ln() / tau.ln()).ceil() as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..mu_nodes {
        let mu = mu_contour.node(j);
        let mut prefac = Complex64::new(1.0, 0.0);
        let mut tk = 1.0;
        for _ in 0..k_prod {
            tk *= tau;
            prefac *= 1.0 - mu * tk;
        }
        let a = j_matrix(mu, &kp, &eta_contour, &zeta_contour)?;
        // det(I + mu J)
        let det = det_id_minus(-mu, &a)?;
        sum += prefac * det;
    }
    Ok((sum / mu_nodes as f64, k_prod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn f_single_pole_term() {
        // truncating to the k = 0 term alone leaves exactly 1/(1 - mu)
        let tau = 0.5;
        let mu = c(0.1, 0.3);
        let z = c(1.2, 0.0);
        let f = f_sum_with_depth(mu, z, tau, 0, 0).unwrap();
        assert!((f - 1.0 / (1.0 - mu)).norm() < 1e-15);
    }

    #[test]
    fn f_matches_rearranged_double_geometric() {
        // expand 1/(1 - tau^k mu) geometrically and resum in the
        // opposite order; valid split at k0 = smallest k with
        // tau^k |mu| < 1
        let tau: f64 = 0.5;
        let mu = c(0.0, 1.5);
        let z = c(1.2, 0.0);
        let k0 = {
            let mut k = 0i32;
            while tau.powi(k) * mu.norm() >= 1.0 {
                k += 1;
            }
            k
        };
        let mut oracle = c(0.0, 0.0);
        // k >= k0: sum_n mu^n (tau^{n+1} z)^{k0} / (1 - tau^{n+1} z)
        for n in 0..200 {
            let w = tau.powi(n + 1) * z;
            oracle += mu.powu(n as u32) * w.powi(k0) / (1.0 - w);
        }
        // k < k0: -sum_{n>=1} mu^{-n} (tau^{1-n} z)^{k0} / (tau^{1-n} z - 1)
        for n in 1..200 {
            let w = tau.powi(1 - n) * z;
            oracle -= mu.powi(-n) * w.powi(k0) / (w - 1.0);
        }
        let f = f_sum(mu, z, tau, 1e-13).unwrap();
        assert!((f - oracle).norm() < 1e-10, "delta {:.3e}", (f - oracle).norm());
    }

    #[test]
    fn f_stable_under_deeper_truncation() {
        let tau = 0.5;
        let mu = c(1.5, 0.0) * Complex64::cis(0.7);
        let z = c(0.3, 1.3);
        let tol = 1e-10;
        let (kp, km) = f_truncation(tau, z.norm(), mu.norm(), tol);
        let base = f_sum_with_depth(mu, z, tau, kp, km).unwrap();
        let deep = f_sum_with_depth(mu, z, tau, kp + 20, km + 20).unwrap();
        assert!((base - deep).norm() < tol);
    }

    #[test]
    fn f_rejects_out_of_annulus() {
        assert!(f_sum(c(1.5, 0.0), c(0.9, 0.0), 0.5, 1e-12).is_err());
        assert!(f_sum(c(1.5, 0.0), c(2.5, 0.0), 0.5, 1e-12).is_err());
    }

    #[test]
    fn f_rejects_pole_proximity() {
        // mu = tau^{-1} = 2 sits on a pole
        assert!(f_sum(c(2.0, 0.0), c(1.2, 0.0), 0.5, 1e-12).is_err());
    }

    #[test]
    fn weight_is_one_on_diagonal() {
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let kp = KernelParams::new(3, 1.5, 2, params);
        let zeta = c(0.3, 1.1);
        let w = lambda_weight(zeta, zeta, &kp);
        assert_relative_eq!((w - 1.0).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn weight_matches_log_form_on_safe_arc() {
        // points with Re(1 - w) > 0 and Re(w) > 0: principal logs apply
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let kp = KernelParams::new(2, 1.0, 1, params);
        let zeta = c(0.4, 1.1);
        let eta_p = c(0.6, 0.3);
        let log_form = ((kp.x as f64) * ((1.0 - zeta).ln() - (1.0 - eta_p).ln())
            + (zeta / (1.0 - zeta) - eta_p / (1.0 - eta_p)) * kp.t
            + (kp.m as f64) * (zeta.ln() - eta_p.ln()))
        .exp();
        let direct = lambda_weight(zeta, eta_p, &kp);
        assert!((direct - log_form).norm() < 1e-12);
    }

    #[test]
    fn j_entry_self_converges_in_zeta_nodes() {
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let kp = KernelParams::new(1, 1.0, 1, params);
        let tau = params.tau();
        let eta = Complex64::from_polar(default_eta_radius(tau), 0.9);
        let eta_p = Complex64::from_polar(default_eta_radius(tau), 2.1);
        let mu = Complex64::from_polar(default_mu_radius(tau), 0.4);
        let coarse_c = ContourSpec::new(default_zeta_radius(tau), 128).unwrap();
        let coarse = kernel_j(eta, eta_p, mu, &kp, &coarse_c).unwrap();
        let fine = kernel_j(eta, eta_p, mu, &kp, &coarse_c.refined()).unwrap();
        assert!(
            (coarse - fine).norm() < 1e-9,
            "delta {:.3e}",
            (coarse - fine).norm()
        );
    }

    #[test]
    fn j_matrix_matches_direct_entries() {
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let kp = KernelParams::new(1, 1.0, 1, params);
        let tau = params.tau();
        let eta_c = ContourSpec::new(default_eta_radius(tau), 24).unwrap();
        let zeta_c = ContourSpec::new(default_zeta_radius(tau), 24).unwrap();
        let mu = Complex64::from_polar(default_mu_radius(tau), 1.3);
        let a = j_matrix(mu, &kp, &eta_c, &zeta_c).unwrap();
        for (i, k) in [(0usize, 0usize), (3, 17), (11, 5)] {
            let direct = kernel_j(eta_c.node(i), eta_c.node(k), mu, &kp, &zeta_c).unwrap()
                * eta_c.weight(k);
            assert!(
                (a.get(i, k) - direct).norm() < 1e-10,
                "entry ({i},{k}) delta {:.3e}",
                (a.get(i, k) - direct).norm()
            );
        }
    }

    #[test]
    fn det_matches_kernel_ratio_identity() {
        // det(I + mu J) on Gamma should equal det(I - lambda K_{x,t})
        // on C_R divided by prod_{k>=1}(1 - lambda tau^k), lambda =
        // tau^{-m} mu: the two sides use unrelated contours and kernels
        use super::super::kernel::{kernel_k, nystrom_matrix};
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let tau = params.tau();
        for (m, x) in [(1u32, 1i64), (2, 0)] {
            let kp = KernelParams::new(x, 1.0, m, params);
            let xi_c = ContourSpec::new(super::super::two_param::default_xi_radius(tau), 192)
                .unwrap();
            let a = nystrom_matrix(&xi_c, |u, v| kernel_k(u, v, &kp)).unwrap();
            let eta_c = ContourSpec::new(default_eta_radius(tau), 128).unwrap();
            let zeta_c = ContourSpec::new(default_zeta_radius(tau), 96).unwrap();
            for arg in [0.4, 1.9, 3.6] {
                let mu = Complex64::from_polar(default_mu_radius(tau), arg);
                let lam = tau.powi(-(m as i32)) * mu;
                let mut prod = c(1.0, 0.0);
                let mut tk = 1.0;
                for _ in 0..60 {
                    tk *= tau;
                    prod *= 1.0 - lam * tk;
                }
                let target = det_id_minus(lam, &a).unwrap() / prod;
                let j = j_matrix(mu, &kp, &eta_c, &zeta_c).unwrap();
                let det = det_id_minus(-mu, &j).unwrap();
                assert!(
                    (det - target).norm() < 1e-8,
                    "m = {m}, x = {x}, arg = {arg}: {det} vs {target}"
                );
            }
        }
    }

    #[test]
    fn det_invariant_under_contour_deformation() {
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let tau = params.tau();
        let kp = KernelParams::new(1, 1.0, 1, params);
        let mu = Complex64::from_polar(default_mu_radius(tau), 2.3);
        let mut dets = Vec::new();
        for (re, rz) in [(1.5, 1.125), (1.4, 0.95), (1.6, 1.3)] {
            let eta_c = ContourSpec::new(re, 160).unwrap();
            let zeta_c = ContourSpec::new(rz, 128).unwrap();
            let j = j_matrix(mu, &kp, &eta_c, &zeta_c).unwrap();
            dets.push(det_id_minus(-mu, &j).unwrap());
        }
        // floor set by the geometric-ladder tail target (1e-12 per
        // entry, accumulated over the matrix)
        for d in &dets[1..] {
            assert!((d - dets[0]).norm() < 1e-7, "{d} vs {}", dets[0]);
        }
    }

    #[test]
    fn rejects_bad_contour_bands() {
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let tau = params.tau();
        let kp = KernelParams::new(0, 1.0, 1, params);
        let mu = Complex64::from_polar(default_mu_radius(tau), 1.0);
        let eta_c = ContourSpec::new(default_eta_radius(tau), 16).unwrap();
        // zeta contour outside the eta contour: Cauchy pole crosses
        let zeta_bad = ContourSpec::new(1.7, 16).unwrap();
        assert!(j_matrix(mu, &kp, &eta_c, &zeta_bad).is_err());
        // eta contour inside the unit circle
        let eta_bad = ContourSpec::new(0.9, 16).unwrap();
        let zeta_c = ContourSpec::new(default_zeta_radius(tau), 16).unwrap();
        assert!(j_matrix(mu, &kp, &eta_bad, &zeta_c).is_err());
    }

    #[test]
    fn rejects_two_param_rates() {
        let params = ModelParams::new(0.7, 0.5).unwrap();
        let qp = QueryPoint::new(1, 1.0, 0).unwrap();
        assert!(prob_one_param(&qp, &params, &OneParamQuad::default()).is_err());
    }

    #[test]
    fn one_param_is_a_cdf_in_x() {
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let quad = OneParamQuad {
            eta_nodes: 96,
            zeta_nodes: 96,
            mu_nodes: 64,
        };
        let mut prev = -1.0;
        for x in [-4, -1, 0, 2, 6] {
            let qp = QueryPoint::new(1, 1.0, x).unwrap();
            let eval = prob_one_param(&qp, &params, &quad).unwrap();
            assert!(eval.prob >= prev - 1e-7, "dip at x = {x}");
            assert!(eval.prob > -1e-6 && eval.prob < 1.0 + 1e-6, "P = {}", eval.prob);
            prev = eval.prob;
        }
        assert!(prev > 0.9, "P(x_1 <= 6) = {prev}");
    }

    #[test]
    fn matches_two_param_formula() {
        use super::super::two_param::{prob_two_param, TwoParamQuad};
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        let quad1 = OneParamQuad {
            eta_nodes: 128,
            zeta_nodes: 96,
            mu_nodes: 96,
        };
        let quad2 = TwoParamQuad {
            xi_nodes: 192,
            lambda_nodes: 128,
        };
        for (m, x) in [(1u32, 0i64), (2, 1)] {
            let qp = QueryPoint::new(m, 1.0, x).unwrap();
            let a = prob_one_param(&qp, &params, &quad1).unwrap().prob;
            let b = prob_two_param(&qp, &params, &quad2).unwrap().prob;
            assert!(
                (a - b).abs() < 1e-6,
                "m = {m}, x = {x}: one-param {a} vs two-param {b}"
            );
        }
    }
}
