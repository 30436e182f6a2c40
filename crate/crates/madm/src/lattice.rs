//! Site-occupancy configurations and formula query points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Occupancy of a single site: a finite stack or the distinguished
/// infinite stack. The infinite stack is a real variant, not a sentinel
/// count, so the "at most one, rightmost" rule is checkable by type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Occupancy {
    Finite(u64),
    Infinite,
}

/// Occupancy map of a finite or step-initialized system.
///
/// Only occupied sites are stored. In finite mode the particle total is
/// tracked and conserved; in infinite mode exactly one site carries the
/// infinite stack and every site to its right is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    occupancy: BTreeMap<i64, Occupancy>,
    particle_total: Option<u64>,
}

impl Configuration {
    /// Finite configuration from (possibly repeated) particle positions.
    pub fn from_positions(positions: &[i64]) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Precondition("empty configuration".into()));
        }
        let mut occupancy = BTreeMap::new();
        for &x in positions {
            if let Occupancy::Finite(n) = occupancy.entry(x).or_insert(Occupancy::Finite(0)) {
                *n += 1;
            }
        }
        Ok(Configuration {
            occupancy,
            particle_total: Some(positions.len() as u64),
        })
    }

    /// Finite stack of `n_big` particles at the origin (the large-N
    /// reading of the step initial condition).
    pub fn step_finite(n_big: u64) -> Result<Self> {
        if n_big == 0 {
            return Err(Error::Precondition("n_big must be positive".into()));
        }
        let mut occupancy = BTreeMap::new();
        occupancy.insert(0, Occupancy::Finite(n_big));
        Ok(Configuration {
            occupancy,
            particle_total: Some(n_big),
        })
    }

    /// Literal step initial condition: the infinite stack at the origin.
    pub fn step_infinite() -> Self {
        let mut occupancy = BTreeMap::new();
        occupancy.insert(0, Occupancy::Infinite);
        Configuration {
            occupancy,
            particle_total: None,
        }
    }

    pub fn occupancy(&self) -> &BTreeMap<i64, Occupancy> {
        &self.occupancy
    }

    pub fn particle_total(&self) -> Option<u64> {
        self.particle_total
    }

    pub fn is_finite_mode(&self) -> bool {
        self.particle_total.is_some()
    }

    /// Site of the infinite stack, if any.
    pub fn infinite_site(&self) -> Option<i64> {
        self.occupancy
            .iter()
            .find(|(_, occ)| **occ == Occupancy::Infinite)
            .map(|(&x, _)| x)
    }

    pub fn count_at(&self, site: i64) -> Occupancy {
        self.occupancy
            .get(&site)
            .copied()
            .unwrap_or(Occupancy::Finite(0))
    }

    pub(crate) fn set_count(&mut self, site: i64, occ: Occupancy) {
        if occ == Occupancy::Finite(0) {
            self.occupancy.remove(&site);
        } else {
            self.occupancy.insert(site, occ);
        }
    }

    /// Positions of finite particles, sorted, with multiplicity.
    pub fn sorted_finite_positions(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for (&x, occ) in &self.occupancy {
            if let Occupancy::Finite(n) = occ {
                out.extend(std::iter::repeat(x).take(*n as usize));
            }
        }
        out
    }

    /// Check the structural invariants (rule 2' and particle conservation).
    pub fn validate(&self) -> Result<()> {
        let infinite_sites: Vec<i64> = self
            .occupancy
            .iter()
            .filter(|(_, occ)| **occ == Occupancy::Infinite)
            .map(|(&x, _)| x)
            .collect();
        if infinite_sites.len() > 1 {
            return Err(Error::Precondition(
                "more than one site carries the infinite stack".into(),
            ));
        }
        if let Some(&z) = infinite_sites.first() {
            if self.particle_total.is_some() {
                return Err(Error::Precondition(
                    "finite mode cannot carry an infinite stack".into(),
                ));
            }
            if self.occupancy.keys().any(|&x| x > z) {
                return Err(Error::Precondition(
                    "sites to the right of the infinite stack must be empty".into(),
                ));
            }
        }
        if let Some(total) = self.particle_total {
            let sum: u64 = self
                .occupancy
                .values()
                .map(|occ| match occ {
                    Occupancy::Finite(n) => *n,
                    Occupancy::Infinite => 0,
                })
                .sum();
            if sum != total {
                return Err(Error::Precondition(format!(
                    "occupancy sums to {sum}, particle_total is {total}"
                )));
            }
        }
        Ok(())
    }
}

/// A query `P(x_m(t/gamma) <= x)`: particle index `m` (1-based, m-th
/// left-most), formula time `t`, lattice position `x`. Physical time is
/// `t / gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryPoint {
    pub m: u32,
    pub t: f64,
    pub x: i64,
}

impl QueryPoint {
    pub fn new(m: u32, t: f64, x: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Precondition("m must be >= 1".into()));
        }
        if !(t > 0.0) {
            return Err(Error::Precondition(format!("t must be positive, got {t}")));
        }
        Ok(QueryPoint { m, t, x })
    }

    /// Physical simulation time `t / gamma` for formula time `t`.
    pub fn physical_time(&self, params: &ModelParams) -> f64 {
        self.t / params.gamma()
    }
}
