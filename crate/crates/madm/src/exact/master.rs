//! Kolmogorov forward equations of the finite MADM on a truncated
//! lattice window, integrated with an adaptive explicit scheme.
//!
//! Probability mass that would jump past the window is dropped; the
//! dropped mass is exactly the conservation defect and is reported as
//! the leak estimate. A query never silently returns when the leak is
//! above `LEAK_LIMIT`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{Configuration, Occupancy};
use crate::ode::{integrate, OdeOptions};
use crate::params::{ModelParams, StackSize};

/// Leak ceiling for a trustworthy answer.
pub const LEAK_LIMIT: f64 = 1e-9;

const MAX_PARTICLES: usize = 4;

/// Final-time distribution over truncated configurations.
#[derive(Debug, Clone)]
pub struct MasterSolution {
    states: Vec<Vec<i64>>,
    probs: Vec<f64>,
    leak: f64,
    window: (i64, i64),
}

impl MasterSolution {
    /// `P(x_m(t) <= x)` read off the final distribution.
    pub fn prob_mth_leq(&self, m: u32, x: i64) -> f64 {
        let idx = m as usize - 1;
        self.states
            .iter()
            .zip(&self.probs)
            .filter(|(s, _)| s[idx] <= x)
            .map(|(_, p)| p)
            .sum()
    }

    /// 1 minus the retained probability mass.
    pub fn leak(&self) -> f64 {
        self.leak
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }
}

/// Integrate the forward equations for initial positions `y` (sorted)
/// up to time `t_physical`.
pub fn master_equation_solve(
    y: &[i64],
    t_physical: f64,
    params: &ModelParams,
    window: (i64, i64),
) -> Result<MasterSolution> {
    let n = y.len();
    if n == 0 || n > MAX_PARTICLES {
        return Err(Error::Precondition(format!(
            "master equation supports 1..={MAX_PARTICLES} particles, got {n}"
        )));
    }
    let (lo, hi) = window;
    if lo >= hi {
        return Err(Error::Precondition("window must satisfy x_lo < x_hi".into()));
    }
    let mut init = y.to_vec();
    init.sort_unstable();
    if init[0] < lo || init[n - 1] > hi {
        return Err(Error::Precondition(
            "initial positions must lie inside the window".into(),
        ));
    }

    let lattice = TruncatedLattice::new(n, window);
    let transitions = lattice.transitions(params)?;

    let mut probs = vec![0.0; lattice.states.len()];
    probs[lattice.index[&init]] = 1.0;

    if t_physical > 0.0 {
        integrate(&mut probs, t_physical, &OdeOptions::default(), |p, dp| {
            dp.fill(0.0);
            for tr in &transitions {
                let flux = tr.rate * p[tr.from];
                dp[tr.from] -= flux;
                if let Some(to) = tr.to {
                    dp[to] += flux;
                }
            }
        })?;
    }

    let retained: f64 = probs.iter().sum();
    Ok(MasterSolution {
        states: lattice.states,
        probs,
        leak: 1.0 - retained,
        window,
    })
}

/// `P^Y(x_m(t) <= x)` via the master equation; fails loudly if the
/// window leak exceeds `LEAK_LIMIT`.
pub fn master_equation_prob(
    y: &[i64],
    m: u32,
    x: i64,
    t_physical: f64,
    params: &ModelParams,
    window: (i64, i64),
) -> Result<f64> {
    if m == 0 || m as usize > y.len() {
        return Err(Error::Precondition(format!(
            "m must lie in 1..={}, got {m}",
            y.len()
        )));
    }
    let solution = master_equation_solve(y, t_physical, params, window)?;
    if solution.leak().abs() > LEAK_LIMIT {
        return Err(Error::WindowLeak {
            leak: solution.leak(),
            limit: LEAK_LIMIT,
        });
    }
    Ok(solution.prob_mth_leq(m, x))
}

struct Transition {
    from: usize,
    to: Option<usize>,
    rate: f64,
}

/// Bijection between sorted N-particle configurations inside the window
/// and vector indices.
struct TruncatedLattice {
    states: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    window: (i64, i64),
}

impl TruncatedLattice {
    fn new(n: usize, window: (i64, i64)) -> Self {
        let mut states = Vec::new();
        let mut current = Vec::with_capacity(n);
        enumerate_sorted(window.0, window.1, n, &mut current, &mut states);
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        TruncatedLattice {
            states,
            index,
            window,
        }
    }

    fn transitions(&self, params: &ModelParams) -> Result<Vec<Transition>> {
        let (lo, hi) = self.window;
        let mut out = Vec::new();
        for (from, state) in self.states.iter().enumerate() {
            let config = Configuration::from_positions(state)?;
            for (&site, &occ) in config.occupancy() {
                let count = match occ {
                    Occupancy::Finite(c) => c,
                    Occupancy::Infinite => unreachable!("finite system"),
                };
                for k in 1..=count {
                    for (to_right, rate) in [
                        (true, params.rate_right(StackSize::Finite(k as u32))?),
                        (false, params.rate_left(StackSize::Finite(k as u32))?),
                    ] {
                        let dest_site = if to_right { site + 1 } else { site - 1 };
                        let to = if dest_site < lo || dest_site > hi {
                            None
                        } else {
                            let mut moved = state.clone();
                            let mut left = k;
                            for p in moved.iter_mut() {
                                if *p == site && left > 0 {
                                    *p = dest_site;
                                    left -= 1;
                                }
                            }
                            moved.sort_unstable();
                            Some(self.index[&moved])
                        };
                        out.push(Transition { from, to, rate });
                    }
                }
            }
        }
        Ok(out)
    }
}

fn enumerate_sorted(
    min: i64,
    max: i64,
    remaining: usize,
    current: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for x in min..=max {
        current.push(x);
        enumerate_sorted(x, max, remaining - 1, current, out);
        current.pop();
    }
}
