//! Two-parameter Fredholm representation: the lambda-contour integral
//! of `det(I - lambda K_{x,t}) / prod_{i=1}^m (1 - lambda tau^i)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::QueryPoint;
use crate::linalg::{det_id_minus_hessenberg, hessenberg};
use crate::params::ModelParams;
use crate::quad::ContourSpec;

use super::kernel::{kernel_k, nystrom_matrix, KernelParams, TAIL_TARGET};

/// Imaginary parts of probability values above this are an error.
pub const IMAG_RESIDUAL_LIMIT: f64 = 1e-7;

/// Cap on `tau^{-m}` (the lambda-contour scale): keeps the determinant
/// values inside comfortable floating range (m <= 6 at tau >= 0.5).
const LAMBDA_SCALE_CAP: f64 = 100.0;

/// Node counts for the two-parameter formula.
#[derive(Debug, Clone, Copy)]
pub struct TwoParamQuad {
    pub xi_nodes: usize,
    pub lambda_nodes: usize,
}

impl Default for TwoParamQuad {
    fn default() -> Self {
        TwoParamQuad {
            xi_nodes: 288,
            lambda_nodes: 192,
        }
    }
}

/// The kernel magnitude grows like `R^x` on the xi contour for `x > 0`,
/// while the pole locus `u + v xi xi' - xi = 0` passes close to the
/// contour (per-node decay only ~0.9-0.96), so the error constant
/// inflates steeply with `x`; pad the node count proportionally. The
/// factor is calibrated empirically: at `x = 20` (tau = 2/3, t = 1)
/// the integral needs roughly 490 nodes for 1e-6 accuracy.
fn xi_nodes_for(base: usize, x: i64) -> usize {
    let per_site: usize = if x > 0 { 20 } else { 4 };
    base + (per_site * x.unsigned_abs() as usize).next_multiple_of(2)
}

/// The determinant magnitude on the lambda contour grows with both `m`
/// (the contour radius scales like `tau^{-m}`) and positive `x` (the
/// kernel norm scales like `R^x`), which inflates the trapezoid error
/// constant; pad the lambda node count accordingly. Cheap: each
/// lambda node costs `O(n^2)` after the Hessenberg reduction.
fn lambda_nodes_for(base: usize, m: u32, x: i64) -> usize {
    base + 32 * m as usize + 2 * x.max(0) as usize
}

/// A probability value with its quadrature diagnostics.
#[derive(Debug, Clone)]
pub struct ProbEval {
    pub prob: f64,
    pub imag_residual: f64,
    /// Change when all node counts are halved; a convergence estimate.
    pub refine_delta: f64,
    pub node_counts: Vec<usize>,
    pub truncation_depths: Vec<usize>,
}

/// Default xi-contour radius: midpoint of the valid band `(1, 1/tau)`.
pub fn default_xi_radius(tau: f64) -> f64 {
    (1.0 + 1.0 / tau) / 2.0
}

/// Lambda-contour radius: `tau^{-m}` scaled to the midpoint of
/// `(tau^{-m}, tau^{-m-1})`, keeping the poles `tau^{-i}`, `i <= m`
/// inside and `tau^{-m-1}` outside.
pub fn lambda_radius(tau: f64, m: u32) -> f64 {
    tau.powi(-(m as i32)) * (1.0 + 1.0 / tau) / 2.0
}

/// `P(x_m(t/gamma) <= x)` for the step initial condition via the
/// two-parameter Fredholm formula.
pub fn prob_two_param(
    qp: &QueryPoint,
    params: &ModelParams,
    quad: &TwoParamQuad,
) -> Result<ProbEval> {
    prob_two_param_with_tail(qp, params, quad, TAIL_TARGET)
}

/// [`prob_two_param`] with an explicit truncation target for the
/// kernel's internal series/product tails.
pub fn prob_two_param_with_tail(
    qp: &QueryPoint,
    params: &ModelParams,
    quad: &TwoParamQuad,
    tail_target: f64,
) -> Result<ProbEval> {
    let tau = params.tau();
    if tau.powi(-(qp.m as i32)) > LAMBDA_SCALE_CAP {
        return Err(Error::Precondition(format!(
            "m = {} too large for the lambda contour at tau = {tau}: \
             tau^-m = {:.3e} exceeds {LAMBDA_SCALE_CAP}",
            qp.m,
            tau.powi(-(qp.m as i32)),
        )));
    }
    if quad.xi_nodes < 8 || quad.lambda_nodes < 8 {
        return Err(Error::Precondition("need at least 8 nodes".into()));
    }
    let value = integral(qp, params, quad.xi_nodes, quad.lambda_nodes, tail_target)?;
    let coarse = integral(qp, params, quad.xi_nodes / 2, quad.lambda_nodes / 2, tail_target)?;
    let imag_residual = value.im.abs();
    if imag_residual > IMAG_RESIDUAL_LIMIT {
        return Err(Error::ResidualTooLarge {
            kind: "two-param imaginary".into(),
            value: imag_residual,
            limit: IMAG_RESIDUAL_LIMIT,
        });
    }
    Ok(ProbEval {
        prob: value.re,
        imag_residual,
        refine_delta: (value - coarse).norm(),
        node_counts: vec![quad.xi_nodes, quad.lambda_nodes],
        truncation_depths: vec![],
    })
}

fn integral(
    qp: &QueryPoint,
    params: &ModelParams,
    xi_nodes: usize,
    lambda_nodes: usize,
    tail_target: f64,
) -> Result<Complex64> {
    let tau = params.tau();
    let kp = KernelParams::new(qp.x, qp.t, qp.m, *params).with_tail_target(tail_target)?;
    let xi_contour = ContourSpec::new(default_xi_radius(tau), xi_nodes_for(xi_nodes, qp.x))?;
    let a = nystrom_matrix(&xi_contour, |xi, xi_p| kernel_k(xi, xi_p, &kp))?;
    // one O(n^3) reduction, then O(n^2) per lambda node
    let h = hessenberg(&a)?;
    let lambda_nodes = lambda_nodes_for(lambda_nodes, qp.m, qp.x);
    let lambda_contour = ContourSpec::new(lambda_radius(tau, qp.m), lambda_nodes)?;
    // with weights lambda_j / M, the measure d(lambda)/lambda becomes 1/M
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..lambda_nodes {
        let lam = lambda_contour.node(j);
        let mut denom = Complex64::new(1.0, 0.0);
        let mut tp = 1.0;
        for _ in 0..qp.m {
            tp *= tau;
            denom *= 1.0 - lam * tp;
        }
        sum += det_id_minus_hessenberg(lam, &h)? / denom;
    }
    Ok(sum / lambda_nodes as f64)
}
