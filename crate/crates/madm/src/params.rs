//! Model parameters, jump rates, and the q-deformed combinatorics they
//! are built from.
//!
//! Rates for a stack of `n` particles are `R_n = p / [n]_tau` (right) and
//! `L_n = q / [n]_{1/tau}` (left) with `[n]_tau = (1 - tau^n) / (1 - tau)`,
//! `tau = v/u`. One-parameter mode is `p = u`, `q = v`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the `u + v = 1`, `p + q = 1` constraint checks.
pub const CONSTRAINT_TOL: f64 = 1e-14;

/// Overflow-guard cap for the bracket factorial/binomial.
pub const BRACKET_N_CAP: u32 = 64;

/// Stack size argument of a jump rate: a positive count or the infinite
/// stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StackSize {
    Finite(u32),
    Infinity,
}

/// Asymmetry parameters `(u, v, p, q, tau, gamma)` with `u + v = 1`,
/// `p + q = 1`, `u > v > 0`, `tau = v/u`, `gamma = u - v`.
///
/// `tau` and `gamma` are stored at construction so every consumer sees a
/// single rounding of `v/u` and `u - v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsSpec", into = "ParamsSpec")]
pub struct ModelParams {
    u: f64,
    v: f64,
    p: f64,
    q: f64,
    tau: f64,
    gamma: f64,
}

/// Wire form of [`ModelParams`]: only the free parameters are serialized,
/// everything else is re-derived and re-validated on load.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ParamsSpec {
    u: f64,
    p: f64,
}

impl TryFrom<ParamsSpec> for ModelParams {
    type Error = Error;
    fn try_from(s: ParamsSpec) -> Result<Self> {
        ModelParams::new(s.u, s.p)
    }
}

impl From<ModelParams> for ParamsSpec {
    fn from(p: ModelParams) -> Self {
        ParamsSpec { u: p.u, p: p.p }
    }
}

impl ModelParams {
    /// Build parameters from the two free weights `(u, p)`, deriving
    /// `v = 1 - u`, `q = 1 - p`, `tau = v/u`, `gamma = u - v`.
    ///
    /// Requires `u > 1/2` (partial asymmetry `u > v > 0`) and `p` in
    /// `(0, 1)`; `p` itself is not required to exceed `1/2`.
    pub fn new(u: f64, p: f64) -> Result<Self> {
        if !u.is_finite() || u <= 0.5 || u >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "u must lie in (1/2, 1), got {u}"
            )));
        }
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "p must lie in (0, 1), got {p}"
            )));
        }
        let v = 1.0 - u;
        let q = 1.0 - p;
        let params = ModelParams {
            u,
            v,
            p,
            q,
            tau: v / u,
            gamma: u - v,
        };
        params.validate()?;
        Ok(params)
    }

    /// One-parameter mode: `p = u`, `q = v`.
    pub fn one_param(u: f64) -> Result<Self> {
        Self::new(u, u)
    }

    /// One-parameter mode from `tau` in `(0, 1)`: `u = 1/(1 + tau)`.
    pub fn one_param_from_tau(tau: f64) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 || tau >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in (0, 1), got {tau}"
            )));
        }
        Self::one_param(1.0 / (1.0 + tau))
    }

    /// Re-check every stored invariant to `CONSTRAINT_TOL`.
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ((self.u + self.v - 1.0).abs(), "u + v = 1"),
            ((self.p + self.q - 1.0).abs(), "p + q = 1"),
            ((self.tau - self.v / self.u).abs(), "tau = v/u"),
            ((self.gamma - (self.u - self.v)).abs(), "gamma = u - v"),
        ];
        for (dev, name) in checks {
            if dev > CONSTRAINT_TOL {
                return Err(Error::InvalidParameter(format!(
                    "constraint {name} violated by {dev:.3e}"
                )));
            }
        }
        if !(self.u > self.v && self.v > 0.0) {
            return Err(Error::InvalidParameter(
                "partial asymmetry u > v > 0 required".into(),
            ));
        }
        Ok(())
    }

    pub fn u(&self) -> f64 {
        self.u
    }
    pub fn v(&self) -> f64 {
        self.v
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `p = u` to constraint tolerance.
    pub fn is_one_param(&self) -> bool {
        (self.p - self.u).abs() <= CONSTRAINT_TOL
    }

    /// Right jump rate `R_n = p / [n]_tau`; `R_inf = p (1 - tau)`.
    pub fn rate_right(&self, n: StackSize) -> Result<f64> {
        Ok(self.p / q_bracket(n, self.tau)?)
    }

    /// Left jump rate `L_n = q / [n]_{1/tau} = q tau^{n-1} (1-tau) / (1-tau^n)`.
    ///
    /// `L_inf = 0` (the infinite stack does not peel as a whole).
    pub fn rate_left(&self, n: StackSize) -> Result<f64> {
        match n {
            StackSize::Infinity => Ok(0.0),
            StackSize::Finite(0) => Err(Error::Precondition(
                "rates are undefined for n = 0".into(),
            )),
            StackSize::Finite(n) => {
                let tau = self.tau;
                Ok(self.q * tau.powi(n as i32 - 1) * (1.0 - tau) / (1.0 - tau.powi(n as i32)))
            }
        }
    }
}

/// q-bracket `[n]_tau = (1 - tau^n) / (1 - tau)`; `[inf]_tau = 1/(1 - tau)`.
pub fn q_bracket(n: StackSize, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Precondition(format!("tau must lie in (0,1), got {tau}")));
    }
    match n {
        StackSize::Infinity => Ok(1.0 / (1.0 - tau)),
        StackSize::Finite(0) => Err(Error::Precondition(
            "q_bracket is undefined for n = 0".into(),
        )),
        StackSize::Finite(n) => Ok((1.0 - tau.powi(n as i32)) / (1.0 - tau)),
    }
}

/// Gaussian binomial coefficient
/// `{m brack r}_tau = prod_{j=0}^{r-1} (1 - tau^{m-j}) / prod_{j=1}^{r} (1 - tau^j)`.
///
/// All factors lie in `(0, 1]` for `tau` in `(0, 1)`, so the direct
/// product form is used without logarithms.
pub fn gaussian_binomial(m: u32, r: u32, tau: f64) -> Result<f64> {
    if r > m {
        return Err(Error::Precondition(format!(
            "gaussian_binomial requires r <= m, got ({m}, {r})"
        )));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Precondition(format!("tau must lie in (0,1), got {tau}")));
    }
    let mut value = 1.0;
    for j in 0..r {
        value *= 1.0 - tau.powi((m - j) as i32);
        value /= 1.0 - tau.powi((j + 1) as i32);
    }
    Ok(value)
}

/// u,v-bracket `[k] = (u^k - v^k) / (u - v)`.
pub fn uv_bracket(k: u32, u: f64, v: f64) -> f64 {
    (u.powi(k as i32) - v.powi(k as i32)) / (u - v)
}

/// Bracket binomial `{N brack m} = [N]! / ([m]! [N-m]!)`.
///
/// Capped at `N <= BRACKET_N_CAP` to keep the intermediate powers of `u`,
/// `v` inside floating range.
pub fn uv_bracket_binomial(n: u32, m: u32, params: &ModelParams) -> Result<f64> {
    if m > n {
        return Err(Error::Precondition(format!(
            "uv_bracket_binomial requires m <= N, got ({n}, {m})"
        )));
    }
    if n > BRACKET_N_CAP {
        return Err(Error::Precondition(format!(
            "uv_bracket_binomial capped at N <= {BRACKET_N_CAP}, got {n}"
        )));
    }
    // [N]!/([m]![N-m]!) = prod_{j=1}^{m} [N-m+j]/[j]
    let mut value = 1.0;
    for j in 1..=m {
        value *= uv_bracket(n - m + j, params.u(), params.v());
        value /= uv_bracket(j, params.u(), params.v());
    }
    Ok(value)
}
