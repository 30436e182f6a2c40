//! Multi-contour integral evaluation of `P^Y(x_m(t) <= x)` for the
//! finite two-parameter MADM: a sum over index subsets `S` with
//! `|S| >= m`, each contributing a k-fold contour integral over nested
//! circles `1 < R_1 < ... < R_N < 1/tau`, evaluated by the periodic
//! trapezoid rule.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{uv_bracket_binomial, ModelParams};
use crate::quad::ContourSpec;

const MAX_PARTICLES: usize = 4;
const IMAG_RESIDUAL_LIMIT: f64 = 1e-8;
const MIN_DENOMINATOR: f64 = 1e-12;

/// Value with quadrature diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct ContourEval {
    pub prob: f64,
    pub imag_residual: f64,
    /// Minimum modulus of `u + v xi xi' - xi'` seen on the node grid;
    /// a numerical check that the nested radii avoid the pair poles.
    pub min_denominator: f64,
}

/// Default nested radii `R_i = 1 + i (1/tau - 1) / (N + 2)`.
pub fn default_radii(n: usize, tau: f64) -> Vec<f64> {
    let gap = (1.0 / tau - 1.0) / (n as f64 + 2.0);
    (1..=n).map(|i| 1.0 + i as f64 * gap).collect()
}

/// Evaluate the subset-sum contour formula at `M` nodes per contour.
///
/// `y` holds the sorted initial positions; `t` multiplies the energy
/// factor directly (the finite-system formula carries no `1/gamma`).
pub fn contour_prob_finite(
    y: &[i64],
    m: u32,
    x: i64,
    t: f64,
    params: &ModelParams,
    nodes_per_contour: usize,
) -> Result<ContourEval> {
    let n = y.len();
    if n == 0 || n > MAX_PARTICLES {
        return Err(Error::Precondition(format!(
            "contour formula supports 1..={MAX_PARTICLES} particles, got {n}"
        )));
    }
    if m == 0 || m as usize > n {
        return Err(Error::Precondition(format!("m must lie in 1..={n}, got {m}")));
    }
    let u = params.u();
    let v = params.v();
    let radii = default_radii(n, params.tau());
    contour_prob_with_radii(y, m, x, t, params, &radii, nodes_per_contour, u, v)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn contour_prob_with_radii(
    y: &[i64],
    m: u32,
    x: i64,
    t: f64,
    params: &ModelParams,
    radii: &[f64],
    nodes_per_contour: usize,
    u: f64,
    v: f64,
) -> Result<ContourEval> {
    let n = y.len();
    let tau = params.tau();
    for (i, &r) in radii.iter().enumerate() {
        let prev = if i == 0 { 1.0 } else { radii[i - 1] };
        if !(r > prev && r < 1.0 / tau) {
            return Err(Error::Precondition(format!(
                "radii must satisfy 1 < R_1 < ... < R_N < 1/tau, got {radii:?}"
            )));
        }
    }

    let contours: Vec<ContourSpec> = radii
        .iter()
        .map(|&r| ContourSpec::new(r, nodes_per_contour))
        .collect::<Result<_>>()?;

    // per-variable factor xi^{x - y_i} e^{eps(xi) t} / (1 - xi), tabulated
    // per original particle index and node
    let single: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..nodes_per_contour)
                .map(|j| {
                    let xi = contours[i].node(j);
                    let eps = params.p() / xi + params.q() * xi - 1.0;
                    xi.powi((x - y[i]) as i32) * (eps * t).exp() / (1.0 - xi)
                })
                .collect()
        })
        .collect();

    let mut total = Complex64::new(0.0, 0.0);
    let mut min_denom = f64::INFINITY;
    let sign_prefactor =
        if m % 2 == 0 { 1.0 } else { -1.0 } * (u * v).powi((m * (m - 1) / 2) as i32);

    for mask in 1u32..(1 << n) {
        let k = mask.count_ones();
        if k < m {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sigma: i64 = subset.iter().map(|&i| i as i64 + 1).sum();
        let bracket = uv_bracket_binomial(k - 1, k - m, params)?;
        let prefactor = sign_prefactor
            * bracket
            * v.powi((sigma - i64::from(m) * i64::from(k)) as i32)
            / u.powi((sigma - i64::from(k) * (i64::from(k) + 1) / 2) as i32);

        let integral = nested_integral(
            &subset,
            &contours,
            &single,
            nodes_per_contour,
            u,
            v,
            &mut min_denom,
        )?;
        total += prefactor * integral;
    }

    let eval = ContourEval {
        prob: total.re,
        imag_residual: total.im.abs(),
        min_denominator: min_denom,
    };
    if eval.imag_residual > IMAG_RESIDUAL_LIMIT {
        return Err(Error::ResidualTooLarge {
            kind: "imaginary part",
            value: eval.imag_residual,
            limit: IMAG_RESIDUAL_LIMIT,
        });
    }
    Ok(eval)
}

/// k-fold trapezoid product over the subset's contours.
fn nested_integral(
    subset: &[usize],
    contours: &[ContourSpec],
    single: &[Vec<Complex64>],
    nodes: usize,
    u: f64,
    v: f64,
    min_denom: &mut f64,
) -> Result<Complex64> {
    let k = subset.len();
    let mut idx = vec![0usize; k];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        // current node tuple
        let mut term = Complex64::new(1.0, 0.0);
        for (slot, &zi) in subset.iter().enumerate() {
            term *= contours[zi].weight(idx[slot]) * single[zi][idx[slot]];
        }
        for a in 0..k {
            for b in a + 1..k {
                let xi_a = contours[subset[a]].node(idx[a]);
                let xi_b = contours[subset[b]].node(idx[b]);
                let denom = u + v * xi_a * xi_b - xi_b;
                let modulus = denom.norm();
                if modulus < *min_denom {
                    *min_denom = modulus;
                }
                if modulus < MIN_DENOMINATOR {
                    return Err(Error::SingularKernel { modulus });
                }
                term *= (xi_a - xi_b) / denom;
            }
        }
        total += term;

        // advance the multi-index
        let mut slot = 0;
        loop {
            if slot == k {
                return Ok(total);
            }
            idx[slot] += 1;
            if idx[slot] < nodes {
                break;
            }
            idx[slot] = 0;
            slot += 1;
        }
    }
}
