//! Exact continuous-time kinetic Monte Carlo simulation of the MADM.
//!
//! Two step-initial-condition schemes are provided: a finite stack of
//! `n_big` particles at the origin (the default for scaling experiments)
//! and the literal infinite-site dynamics with left-peel rates truncated
//! at a depth where the neglected rate tail is below 1e-10.
//!
//! The simulator always runs in physical time; callers comparing against
//! the determinant formulas convert formula time once via `t / gamma`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Configuration, Occupancy};
use crate::params::{ModelParams, StackSize};

/// Hard cap on events per replica.
pub const EVENT_BUDGET: u64 = 1_000_000_000;

/// Neglected left-peel rate tail target for the infinite-site scheme.
pub const PEEL_TAIL_TARGET: f64 = 1e-10;

/// Number of particles moved by one event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpSize {
    Stack(u32),
    All,
}

/// One enabled Gillespie event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub site: i64,
    pub to_right: bool,
    pub size: JumpSize,
    pub rate: f64,
}

/// Full description of a simulation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: ModelParams,
    pub init: Configuration,
    pub t_end_physical: f64,
    pub replicas: u64,
    pub seed: u64,
    /// Particle-count cap standing in for the infinite stack (step mode).
    pub n_big: u64,
    /// Truncation depth for infinite-site left-peel rates.
    pub n_max_peel: u32,
}

impl SimConfig {
    /// Finite-mode run from an explicit initial configuration.
    pub fn finite(
        params: ModelParams,
        init: Configuration,
        t_end_physical: f64,
        replicas: u64,
        seed: u64,
    ) -> Result<Self> {
        if !init.is_finite_mode() {
            return Err(Error::Precondition("expected a finite configuration".into()));
        }
        let n_big = init.particle_total().unwrap();
        Self::build(params, init, t_end_physical, replicas, seed, n_big)
    }

    /// Step mode via a finite stack of `n_big` particles at the origin.
    pub fn step(
        params: ModelParams,
        t_end_physical: f64,
        replicas: u64,
        seed: u64,
        n_big: u64,
    ) -> Result<Self> {
        let init = Configuration::step_finite(n_big)?;
        Self::build(params, init, t_end_physical, replicas, seed, n_big)
    }

    /// Step mode via the literal infinite-site dynamics.
    pub fn step_infinite(
        params: ModelParams,
        t_end_physical: f64,
        replicas: u64,
        seed: u64,
        n_big: u64,
    ) -> Result<Self> {
        let init = Configuration::step_infinite();
        Self::build(params, init, t_end_physical, replicas, seed, n_big)
    }

    fn build(
        params: ModelParams,
        init: Configuration,
        t_end_physical: f64,
        replicas: u64,
        seed: u64,
        n_big: u64,
    ) -> Result<Self> {
        if replicas < 1 {
            return Err(Error::Precondition("replicas must be >= 1".into()));
        }
        if !(t_end_physical >= 0.0) {
            return Err(Error::Precondition("t_end_physical must be >= 0".into()));
        }
        init.validate()?;
        Ok(SimConfig {
            params,
            init,
            t_end_physical,
            replicas,
            seed,
            n_big,
            n_max_peel: default_peel_depth(&params),
        })
    }

    /// `n_big >= 4 m` and `n_big >= 16` for a tracked particle index `m`.
    pub fn check_tracked_index(&self, m: u32) -> Result<()> {
        if m == 0 {
            return Err(Error::Precondition("m must be >= 1".into()));
        }
        if self.init.is_finite_mode() {
            if u64::from(m) > self.n_big {
                return Err(Error::Precondition(format!(
                    "m = {m} exceeds particle count {}",
                    self.n_big
                )));
            }
        } else if self.n_big < 16 || self.n_big < 4 * u64::from(m) {
            return Err(Error::Precondition(format!(
                "step mode requires n_big >= max(16, 4m); n_big = {}, m = {m}",
                self.n_big
            )));
        }
        Ok(())
    }
}

/// Smallest depth `P` with `sum_{n > P} L_n < PEEL_TAIL_TARGET`, from the
/// geometric bound `L_n <= q tau^{n-1}`.
pub fn default_peel_depth(params: &ModelParams) -> u32 {
    let tau = params.tau();
    let q = params.q();
    // q tau^P / (1 - tau) < target
    let p = ((PEEL_TAIL_TARGET * (1.0 - tau) / q).ln() / tau.ln()).ceil();
    (p.max(1.0)) as u32
}

/// Prefix sums of the jump rates, so per-site totals and within-site event
/// selection are table lookups. Grows on demand as stacks merge.
#[derive(Debug, Clone)]
struct RateTable {
    params: ModelParams,
    /// pr[n] = R_1 + ... + R_n
    pr: Vec<f64>,
    /// pl[n] = L_1 + ... + L_n
    pl: Vec<f64>,
    r_inf: f64,
    peel: u32,
}

impl RateTable {
    fn new(params: &ModelParams, max_stack: u32, peel: u32) -> Self {
        let mut table = RateTable {
            params: *params,
            pr: vec![0.0],
            pl: vec![0.0],
            r_inf: params.rate_right(StackSize::Infinity).unwrap(),
            peel,
        };
        table.ensure(max_stack.max(peel) as usize);
        table
    }

    fn ensure(&mut self, n: usize) {
        while self.pr.len() <= n {
            let k = self.pr.len() as u32;
            self.pr
                .push(self.pr[k as usize - 1] + self.params.rate_right(StackSize::Finite(k)).unwrap());
            self.pl
                .push(self.pl[k as usize - 1] + self.params.rate_left(StackSize::Finite(k)).unwrap());
        }
    }

    fn site_rate(&mut self, occ: Occupancy) -> f64 {
        match occ {
            Occupancy::Finite(n) => {
                self.ensure(n as usize);
                self.pr[n as usize] + self.pl[n as usize]
            }
            Occupancy::Infinite => self.r_inf + self.pl[self.peel as usize],
        }
    }
}

/// Enumerate every enabled event of a configuration, per the jump rules:
/// a site holding `n` finite particles carries right and left clocks for
/// every stack size `1..=n`; the infinite site carries one all-particles
/// right clock and truncated left-peel clocks.
pub fn enabled_events(
    config: &Configuration,
    params: &ModelParams,
    n_max_peel: u32,
) -> Result<Vec<Event>> {
    config.validate()?;
    let mut events = Vec::new();
    for (&site, &occ) in config.occupancy() {
        match occ {
            Occupancy::Finite(count) => {
                for n in 1..=count {
                    events.push(Event {
                        site,
                        to_right: true,
                        size: JumpSize::Stack(n as u32),
                        rate: params.rate_right(StackSize::Finite(n as u32))?,
                    });
                    events.push(Event {
                        site,
                        to_right: false,
                        size: JumpSize::Stack(n as u32),
                        rate: params.rate_left(StackSize::Finite(n as u32))?,
                    });
                }
            }
            Occupancy::Infinite => {
                events.push(Event {
                    site,
                    to_right: true,
                    size: JumpSize::All,
                    rate: params.rate_right(StackSize::Infinity)?,
                });
                for n in 1..=n_max_peel {
                    events.push(Event {
                        site,
                        to_right: false,
                        size: JumpSize::Stack(n),
                        rate: params.rate_left(StackSize::Finite(n))?,
                    });
                }
            }
        }
    }
    Ok(events)
}

/// Apply one event to a configuration. Right jumps merge into an infinite
/// destination without changing it; moving the whole infinite stack
/// shifts the infinite site one step right.
pub fn apply_event(config: &Configuration, event: &Event) -> Result<Configuration> {
    let mut next = config.clone();
    let from = event.site;
    let to = if event.to_right { from + 1 } else { from - 1 };
    match (next.count_at(from), event.size) {
        (Occupancy::Finite(have), JumpSize::Stack(n)) => {
            let n = u64::from(n);
            if n == 0 || n > have {
                return Err(Error::Precondition(format!(
                    "event moves {n} particles from a site holding {have}"
                )));
            }
            next.set_count(from, Occupancy::Finite(have - n));
            match next.count_at(to) {
                Occupancy::Finite(dest) => next.set_count(to, Occupancy::Finite(dest + n)),
                Occupancy::Infinite => {}
            }
        }
        (Occupancy::Infinite, JumpSize::All) => {
            next.set_count(from, Occupancy::Finite(0));
            next.set_count(to, Occupancy::Infinite);
        }
        (Occupancy::Infinite, JumpSize::Stack(n)) => {
            if event.to_right {
                return Err(Error::Precondition(
                    "finite right jumps are disabled at the infinite site".into(),
                ));
            }
            match next.count_at(to) {
                Occupancy::Finite(dest) => {
                    next.set_count(to, Occupancy::Finite(dest + u64::from(n)))
                }
                Occupancy::Infinite => unreachable!("two infinite sites"),
            }
        }
        (Occupancy::Finite(_), JumpSize::All) => {
            return Err(Error::Precondition(
                "all-particle jump is only defined at the infinite site".into(),
            ));
        }
    }
    next.validate()?;
    Ok(next)
}

/// One Gillespie step: exponential waiting time at the total rate, event
/// chosen proportionally to its rate.
pub fn step(
    config: &Configuration,
    params: &ModelParams,
    n_max_peel: u32,
    rng: &mut impl Rng,
) -> Result<(Configuration, f64)> {
    let events = enabled_events(config, params, n_max_peel)?;
    let total: f64 = events.iter().map(|e| e.rate).sum();
    if !(total > 0.0) {
        return Err(Error::Precondition("no enabled events".into()));
    }
    let elapsed = sample_exponential(rng, total);
    let mut target = rng.gen::<f64>() * total;
    let mut chosen = events.len() - 1;
    for (i, e) in events.iter().enumerate() {
        if target < e.rate {
            chosen = i;
            break;
        }
        target -= e.rate;
    }
    Ok((apply_event(config, &events[chosen])?, elapsed))
}

fn sample_exponential(rng: &mut impl Rng, rate: f64) -> f64 {
    let u: f64 = rng.gen();
    -(1.0 - u).ln() / rate
}

/// Mutable flat-array engine behind `run_replica`: sorted occupied sites
/// with cached per-site total rates, linear-scan site selection, binary
/// search within a site.
struct Engine {
    table: RateTable,
    sites: Vec<i64>,
    occ: Vec<Occupancy>,
    rate: Vec<f64>,
    total: f64,
    events_since_rebuild: u32,
}

impl Engine {
    fn new(config: &Configuration, params: &ModelParams, n_max_peel: u32) -> Self {
        let max_stack = config.particle_total().unwrap_or(0).min(u32::MAX as u64) as u32;
        let mut table = RateTable::new(params, max_stack.max(1), n_max_peel);
        let mut sites = Vec::new();
        let mut occ = Vec::new();
        let mut rate = Vec::new();
        for (&x, &o) in config.occupancy() {
            sites.push(x);
            occ.push(o);
            rate.push(table.site_rate(o));
        }
        let total = rate.iter().sum();
        Engine {
            table,
            sites,
            occ,
            rate,
            total,
            events_since_rebuild: 0,
        }
    }

    fn rebuild_total(&mut self) {
        self.total = self.rate.iter().sum();
        self.events_since_rebuild = 0;
    }

    fn add_particles(&mut self, site: i64, n: u64) {
        match self.sites.binary_search(&site) {
            Ok(idx) => {
                match self.occ[idx] {
                    Occupancy::Finite(have) => {
                        self.occ[idx] = Occupancy::Finite(have + n);
                        let new_rate = self.table.site_rate(self.occ[idx]);
                        self.total += new_rate - self.rate[idx];
                        self.rate[idx] = new_rate;
                    }
                    Occupancy::Infinite => {}
                }
            }
            Err(idx) => {
                let o = Occupancy::Finite(n);
                let r = self.table.site_rate(o);
                self.sites.insert(idx, site);
                self.occ.insert(idx, o);
                self.rate.insert(idx, r);
                self.total += r;
            }
        }
    }

    fn remove_site(&mut self, idx: usize) {
        self.total -= self.rate[idx];
        self.sites.remove(idx);
        self.occ.remove(idx);
        self.rate.remove(idx);
    }

    /// Choose and execute one event in place.
    fn fire(&mut self, rng: &mut ChaCha8Rng) {
        debug_assert!(self.total > 0.0);

        // pick the site by linear scan of cached rates
        let target = rng.gen::<f64>() * self.total;
        let mut acc = 0.0;
        let mut idx = self.rate.len() - 1;
        for (i, r) in self.rate.iter().enumerate() {
            acc += r;
            if target < acc {
                idx = i;
                break;
            }
        }

        let site = self.sites[idx];
        let within = rng.gen::<f64>() * self.rate[idx];
        match self.occ[idx] {
            Occupancy::Finite(count) => {
                let n = count as usize;
                let right_total = self.table.pr[n];
                let (to_right, moved) = if within < right_total {
                    (true, search_prefix(&self.table.pr[..=n], within))
                } else {
                    (false, search_prefix(&self.table.pl[..=n], within - right_total))
                };
                let moved = moved as u64;
                let dest = if to_right { site + 1 } else { site - 1 };
                if moved == count {
                    self.remove_site(idx);
                } else {
                    self.occ[idx] = Occupancy::Finite(count - moved);
                    let new_rate = self.table.site_rate(self.occ[idx]);
                    self.total += new_rate - self.rate[idx];
                    self.rate[idx] = new_rate;
                }
                self.add_particles(dest, moved);
            }
            Occupancy::Infinite => {
                if within < self.table.r_inf {
                    // whole infinite stack moves right; destination empty by rule 2'
                    self.remove_site(idx);
                    let o = Occupancy::Infinite;
                    let r = self.table.site_rate(o);
                    let pos = self.sites.binary_search(&(site + 1)).unwrap_err();
                    self.sites.insert(pos, site + 1);
                    self.occ.insert(pos, o);
                    self.rate.insert(pos, r);
                    self.total += r;
                } else {
                    let peel = self.table.peel as usize;
                    let moved =
                        search_prefix(&self.table.pl[..=peel], within - self.table.r_inf) as u64;
                    self.add_particles(site - 1, moved);
                }
            }
        }

        self.events_since_rebuild += 1;
        if self.events_since_rebuild >= 4096 {
            self.rebuild_total();
        }
    }
}

/// Smallest `n >= 1` with `prefix[n] > target` for a strictly increasing
/// prefix-sum table starting at `prefix[0] = 0`.
fn search_prefix(prefix: &[f64], target: f64) -> u32 {
    let n = prefix.partition_point(|&p| p <= target);
    (n.min(prefix.len() - 1).max(1)) as u32
}

/// Run one replica to `t_end_physical`, deterministically in
/// `(seed, replica_index)`, and return the sorted positions of the
/// `n_big` leftmost particles.
pub fn run_replica(cfg: &SimConfig, replica_index: u64) -> Result<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(replica_index);
    let mut engine = Engine::new(&cfg.init, &cfg.params, cfg.n_max_peel);
    let mut t = 0.0;
    let mut events: u64 = 0;
    loop {
        if engine.total <= 0.0 {
            break;
        }
        // waiting time first; the event only fires if it lands inside the horizon
        let dt = sample_exponential(&mut rng, engine.total);
        if t + dt > cfg.t_end_physical {
            break;
        }
        t += dt;
        engine.fire(&mut rng);
        events += 1;
        if events > EVENT_BUDGET {
            return Err(Error::EventBudgetExceeded { limit: EVENT_BUDGET });
        }
    }
    Ok(engine.final_positions(cfg.n_big))
}

impl Engine {
    fn final_positions(&self, n_big: u64) -> Vec<i64> {
        let mut out = Vec::new();
        let mut infinite_at = None;
        for (i, &o) in self.occ.iter().enumerate() {
            match o {
                Occupancy::Finite(n) => {
                    out.extend(std::iter::repeat(self.sites[i]).take(n as usize))
                }
                Occupancy::Infinite => infinite_at = Some(self.sites[i]),
            }
        }
        if let Some(z) = infinite_at {
            while (out.len() as u64) < n_big {
                out.push(z);
            }
        }
        out
    }
}

/// Monte Carlo estimate of `P(x_m <= x)` on a grid, with binomial
/// standard errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    pub xs: Vec<i64>,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub replicas: u64,
}

/// Sample `x_m` (the m-th order statistic of positions) once per replica.
pub fn sample_mth_positions(cfg: &SimConfig, m: u32) -> Result<Vec<i64>> {
    cfg.check_tracked_index(m)?;
    (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let positions = run_replica(cfg, r)?;
            positions.get(m as usize - 1).copied().ok_or_else(|| {
                Error::Precondition(format!("replica holds fewer than {m} particles"))
            })
        })
        .collect()
}

/// Estimate `P(x_m(t_end_physical) <= x)` over `x_grid`.
pub fn empirical_cdf(cfg: &SimConfig, m: u32, x_grid: &[i64]) -> Result<EmpiricalCdf> {
    let samples = sample_mth_positions(cfg, m)?;
    let n = samples.len() as f64;
    let mut values = Vec::with_capacity(x_grid.len());
    let mut stderr = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let hits = samples.iter().filter(|&&s| s <= x).count() as f64;
        let p = hits / n;
        values.push(p);
        stderr.push((p * (1.0 - p) / n).sqrt());
    }
    Ok(EmpiricalCdf {
        xs: x_grid.to_vec(),
        values,
        stderr,
        replicas: cfg.replicas,
    })
}
