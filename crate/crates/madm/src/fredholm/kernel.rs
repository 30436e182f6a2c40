//! The two-parameter kernel and the shared Nystrom determinant
//! machinery: discretized operators on circular contours, LU
//! determinants, and the brute-force Fredholm series oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{det_id_minus, det_small, CMatrix};
use crate::params::ModelParams;
use crate::quad::ContourSpec;

/// Denominators smaller than this are treated as singular.
pub const MIN_DENOMINATOR: f64 = 1e-12;

/// Default tail target for every series / infinite-product truncation.
pub const TAIL_TARGET: f64 = 1e-12;

/// Inputs shared by all kernels: the query `(x, t, m)`, the model
/// parameters, and the truncation tail target.
#[derive(Debug, Clone, Copy)]
pub struct KernelParams {
    pub x: i64,
    pub t: f64,
    pub m: u32,
    pub params: ModelParams,
    pub tail_target: f64,
}

impl KernelParams {
    pub fn new(x: i64, t: f64, m: u32, params: ModelParams) -> Self {
        KernelParams {
            x,
            t,
            m,
            params,
            tail_target: TAIL_TARGET,
        }
    }

    /// Override the truncation tail target (validated band keeps the
    /// truncations both meaningful and finite).
    pub fn with_tail_target(mut self, tail_target: f64) -> Result<Self> {
        if !(1e-16..=1e-6).contains(&tail_target) {
            return Err(Error::Precondition(format!(
                "tail target {tail_target:.3e} outside [1e-16, 1e-6]"
            )));
        }
        self.tail_target = tail_target;
        Ok(self)
    }
}

/// Single-particle rate function `eps(xi) = p/xi + q*xi - 1`.
pub fn epsilon(params: &ModelParams, xi: Complex64) -> Complex64 {
    params.p() / xi + params.q() * xi - 1.0
}

/// Two-parameter kernel
/// `K_{x,t}(xi, xi') = v xi'^x e^{eps(xi') t/gamma} (tau xi' - 1) /
/// ((u + v xi xi' - xi)(1 - tau))`.
pub fn kernel_k(xi: Complex64, xi_p: Complex64, kp: &KernelParams) -> Result<Complex64> {
    let pr = &kp.params;
    let den = pr.u() + pr.v() * xi * xi_p - xi;
    if den.norm() < MIN_DENOMINATOR {
        return Err(Error::SingularKernel {
            modulus: den.norm(),
        });
    }
    let tau = pr.tau();
    let growth = (epsilon(pr, xi_p) * (kp.t / pr.gamma())).exp();
    Ok(pr.v() * xi_p.powi(kp.x as i32) * growth * (tau * xi_p - 1.0) / ((1.0 - tau) * den))
}

/// Discretized operator `A_{jk} = kernel(z_j, z_k) w_k` on a circular
/// contour; the weights `z_k / M` absorb the `1/(2 pi i)`.
pub fn nystrom_matrix(
    contour: &ContourSpec,
    mut kernel: impl FnMut(Complex64, Complex64) -> Result<Complex64>,
) -> Result<CMatrix> {
    let pts = contour.points();
    let n = pts.len();
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, kernel(pts[i].0, pts[j].0)? * pts[j].1);
        }
    }
    Ok(a)
}

/// `det(I - lambda K)` by Nystrom discretization on the contour.
pub fn nystrom_det(
    contour: &ContourSpec,
    lambda: Complex64,
    kernel: impl FnMut(Complex64, Complex64) -> Result<Complex64>,
) -> Result<Complex64> {
    let a = nystrom_matrix(contour, kernel)?;
    det_id_minus(lambda, &a)
}

/// Truncated Fredholm series
/// `sum_k (-lambda)^k / k! \oint...\oint det(K(z_i, z_j)) dz_1...dz_k`,
/// evaluated term by term as a brute-force oracle for `nystrom_det`.
/// `k_max <= 3`; errors if the term-ratio tail estimate exceeds 1e-9.
pub fn fredholm_series_det(
    contour: &ContourSpec,
    lambda: Complex64,
    k_max: usize,
    mut kernel: impl FnMut(Complex64, Complex64) -> Result<Complex64>,
) -> Result<Complex64> {
    if k_max > 3 {
        return Err(Error::Precondition(format!(
            "series oracle supports k_max <= 3, got {k_max}"
        )));
    }
    let pts = contour.points();
    let n = pts.len();
    let mut table = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = kernel(pts[i].0, pts[j].0)?;
        }
    }
    let mut terms = vec![Complex64::new(1.0, 0.0)];
    let mut factorial = 1.0;
    for k in 1..=k_max {
        factorial *= k as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; k];
        loop {
            let weight: Complex64 = idx.iter().map(|&i| pts[i].1).product();
            let det = det_small(k, |a, b| table[idx[a] * n + idx[b]]);
            acc += weight * det;
            let mut slot = 0;
            loop {
                if slot == k {
                    break;
                }
                idx[slot] += 1;
                if idx[slot] < n {
                    break;
                }
                idx[slot] = 0;
                slot += 1;
            }
            if slot == k {
                break;
            }
        }
        terms.push((-lambda).powu(k as u32) / factorial * acc);
    }
    if k_max >= 2 {
        let last = terms[k_max].norm();
        let prev = terms[k_max - 1].norm();
        if prev > 0.0 {
            let ratio = last / prev;
            if ratio >= 1.0 {
                return Err(Error::NotConverged(format!(
                    "series terms not decreasing (ratio {ratio:.3e})"
                )));
            }
            let tail = last * ratio / (1.0 - ratio);
            if tail > 1e-9 {
                return Err(Error::NotConverged(format!(
                    "series tail estimate {tail:.3e} exceeds 1e-9"
                )));
            }
        }
    }
    Ok(terms.into_iter().sum())
}
