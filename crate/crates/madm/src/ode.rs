//! Adaptive explicit Runge-Kutta integrator (Dormand-Prince 5(4)) for the
//! truncated master equation. The generator has rates of order one, so an
//! explicit scheme with a step-count guard is adequate.

use crate::error::{Error, Result};

pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 2_000_000,
        }
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `y' = rhs(y)` (autonomous) from 0 to `t_end`, in place.
pub fn integrate(
    y: &mut [f64],
    t_end: f64,
    opts: &OdeOptions,
    mut rhs: impl FnMut(&[f64], &mut [f64]),
) -> Result<()> {
    let n = y.len();
    let mut t = 0.0;
    let mut h = (t_end / 100.0).min(0.1).max(1e-6);
    let mut k = vec![vec![0.0; n]; 7];
    let mut y_stage = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    rhs(y, &mut k[0]);
    let mut steps = 0usize;
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::NotConverged(format!(
                "ODE step budget ({}) exhausted at t = {t:.6}",
                opts.max_steps
            )));
        }
        steps += 1;
        if t + h > t_end {
            h = t_end - t;
        }
        for stage in 0..6 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    acc += A[stage][j] * kj[i];
                }
                y_stage[i] = y[i] + h * acc;
            }
            let (head, tail) = k.split_at_mut(stage + 1);
            let _ = head;
            rhs(&y_stage, &mut tail[0]);
        }
        let mut err = 0.0f64;
        for i in 0..n {
            let mut acc5 = 0.0;
            let mut acc4 = 0.0;
            for j in 0..7 {
                acc5 += B5[j] * k[j][i];
                acc4 += B4[j] * k[j][i];
            }
            y5[i] = y[i] + h * acc5;
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
            let e = h * (acc5 - acc4) / scale;
            err = err.max(e.abs());
        }
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            // FSAL
            let k_last = k[6].clone();
            k[0].copy_from_slice(&k_last);
        } else {
            // recompute k[0] only on rejection when FSAL state is stale
            rhs(y, &mut k[0]);
        }
        let factor = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        h = (h * factor).min(t_end);
    }
    Ok(())
}
