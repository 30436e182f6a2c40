//! The Airy function `Ai` and its derivative, to roughly 1e-12
//! absolute accuracy on `[-40, +inf)`.
//!
//! Three regimes:
//! - `|x| <= 6`: Maclaurin series (cancellation costs at most ~1e4 in
//!   amplitude, keeping the absolute error near 1e-12);
//! - `x < -6`: Taylor-series analytic continuation stepping from 0
//!   (both solutions of `y'' = xy` stay bounded on the negative axis,
//!   so roundoff does not amplify);
//! - `x > 6`: the standard asymptotic expansion in
//!   `zeta = (2/3) x^{3/2}`, truncated at its smallest term (the
//!   relative error there is ~1e-10 at worst, on values below 1e-5).

use crate::error::{Error, Result};

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)`.
pub const AIRY_AT_ZERO: f64 = 0.355_028_053_887_817_24;
/// `-Ai'(0) = 3^{-1/3} / Gamma(1/3)`.
pub const AIRY_PRIME_AT_ZERO: f64 = -0.258_819_403_792_806_8;

const MACLAURIN_LIMIT: f64 = 5.5;
/// On the oscillatory side the Maclaurin cancellation noise grows like
/// `e^{(2/3)|x|^{3/2}} eps`, so hand off to the Taylor continuation
/// earlier than on the right.
const LEFT_MACLAURIN_LIMIT: f64 = -4.5;
const CONTINUATION_LIMIT: f64 = -40.0;
/// Beyond this the asymptotic value underflows any 1e-12 target.
const FAR_RIGHT: f64 = 40.0;

/// `Ai(x)` and `Ai'(x)` together (they share all intermediate work).
pub fn airy_ai_pair(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Precondition("non-finite Airy argument".into()));
    }
    if x < CONTINUATION_LIMIT {
        return Err(Error::Precondition(format!(
            "Airy argument {x} below the supported range {CONTINUATION_LIMIT}"
        )));
    }
    if x > FAR_RIGHT {
        return Ok((0.0, 0.0));
    }
    if x > MACLAURIN_LIMIT {
        Ok(asymptotic_right(x))
    } else if x >= LEFT_MACLAURIN_LIMIT {
        Ok(maclaurin(x))
    } else {
        Ok(taylor_continue(x))
    }
}

/// `Ai(x)`.
pub fn airy_ai(x: f64) -> Result<f64> {
    airy_ai_pair(x).map(|(a, _)| a)
}

/// `Ai'(x)`.
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy_ai_pair(x).map(|(_, d)| d)
}

/// Maclaurin series: `Ai = c1 F(x) - c2 G(x)` with
/// `F = sum x^{3k} / prod (3j)(3j-1)` and
/// `G = sum x^{3k+1} / prod (3j)(3j+1)`.
fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut fp) = (1.0f64, 0.0f64); // F and F'
    let (mut g, mut gp) = (x, 1.0f64); // G and G'
    let mut tf = 1.0f64;
    let mut tg = x;
    for k in 1..200 {
        let kk = k as f64;
        tf *= x3 / ((3.0 * kk) * (3.0 * kk - 1.0));
        tg *= x3 / ((3.0 * kk) * (3.0 * kk + 1.0));
        f += tf;
        g += tg;
        // term-by-term derivatives: d/dx x^{3k} = 3k x^{3k-1}
        if x != 0.0 {
            fp += tf * 3.0 * kk / x;
            gp += tg * (3.0 * kk + 1.0) / x;
        }
        if tf.abs() < 1e-18 && tg.abs() < 1e-18 {
            break;
        }
    }
    let c1 = AIRY_AT_ZERO;
    let c2 = -AIRY_PRIME_AT_ZERO;
    (c1 * f - c2 * g, c1 * fp - c2 * gp)
}

/// Step-by-step Taylor continuation of `y'' = x y` from the Maclaurin
/// anchor at `LEFT_MACLAURIN_LIMIT` down to `x`.
fn taylor_continue(x: f64) -> (f64, f64) {
    let mut x0 = LEFT_MACLAURIN_LIMIT;
    let (mut y, mut yp) = maclaurin(x0);
    let step = 0.75f64;
    while x0 - x > 1e-12 {
        let h = -(x0 - x).min(step);
        let (ny, nyp) = taylor_step(x0, y, yp, h);
        y = ny;
        yp = nyp;
        x0 += h;
    }
    (y, yp)
}

/// One local Taylor step for `y'' = x y`: coefficients from
/// `a_{n+2} = (x0 a_n + a_{n-1}) / ((n+1)(n+2))`.
fn taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    const N: usize = 40;
    let mut a = [0.0f64; N];
    a[0] = y;
    a[1] = yp;
    for n in 0..N - 2 {
        let prev = if n == 0 { 0.0 } else { a[n - 1] };
        a[n + 2] = (x0 * a[n] + prev) / (((n + 1) * (n + 2)) as f64);
    }
    // Horner evaluation of the polynomial and its derivative at h
    let mut val = 0.0;
    let mut der = 0.0;
    for n in (1..N).rev() {
        val = val * h + a[n];
        der = der * h + a[n] * n as f64;
    }
    val = val * h + a[0];
    (val, der)
}

/// Asymptotic expansion for `x > 6`:
/// `Ai ~ e^{-zeta} / (2 sqrt(pi) x^{1/4}) sum (-1)^k u_k zeta^{-k}`,
/// `Ai' ~ -x^{1/4} e^{-zeta} / (2 sqrt(pi)) sum (-1)^k v_k zeta^{-k}`,
/// with `u_0 = 1`, `u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1))`
/// and `v_k = u_k (6k+1)/(1-6k)`; truncated at the smallest term.
fn asymptotic_right(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut u = 1.0f64;
    let mut sum_a = 1.0f64;
    let mut sum_d = 1.0f64;
    let mut zk = 1.0f64;
    let mut sign = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kk = k as f64;
        u *= (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0)
            / (216.0 * kk * (2.0 * kk - 1.0));
        zk /= zeta;
        sign = -sign;
        let term = u * zk;
        if term.abs() >= last {
            break; // smallest term reached: stop before divergence
        }
        last = term.abs();
        sum_a += sign * term;
        sum_d += sign * term * (6.0 * kk + 1.0) / (1.0 - 6.0 * kk);
    }
    let front = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let ai = front / x.powf(0.25) * sum_a;
    let aip = -front * x.powf(0.25) * sum_d;
    (ai, aip)
}

/// Airy kernel `(Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y)`, with the
/// diagonal limit `Ai'(z)^2 - z Ai(z)^2` (evaluated at the midpoint)
/// when `|x - y| < 1e-6`.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    if (x - y).abs() < 1e-6 {
        let z = 0.5 * (x + y);
        let (a, d) = airy_ai_pair(z)?;
        Ok(d * d - z * a * a)
    } else {
        let (ax, dx) = airy_ai_pair(x)?;
        let (ay, dy) = airy_ai_pair(y)?;
        Ok((ax * dy - dx * ay) / (x - y))
    }
}
