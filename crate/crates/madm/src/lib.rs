//! Numerical laboratory for the multi-particle hopping asymmetric
//! diffusion model (MADM): exact kinetic Monte Carlo simulation,
//! master-equation and multi-contour oracles for small systems, Fredholm
//! determinant evaluation of the step-initial-condition distribution, and
//! the Tracy-Widom F2 scaling limit.

pub mod asympt;
pub mod error;
pub mod exact;
pub mod fredholm;
pub mod lattice;
pub mod linalg;
pub mod ode;
pub mod params;
pub mod quad;
pub mod report;
pub mod sim;
pub mod skellam;

pub use error::{Error, Result};
pub use lattice::{Configuration, Occupancy, QueryPoint};
pub use params::{ModelParams, StackSize};
pub use quad::ContourSpec;
