//! Exact finite-system oracles: a truncated master-equation solver and
//! the multi-contour integral formula for `P^Y(x_m(t) <= x)`, each
//! independent of the other, plus the combinatorial identity checks that
//! anchor the series manipulations behind the determinant formulas.

mod contour;
mod identities;
mod master;

pub use contour::{contour_prob_finite, ContourEval};
pub use identities::{strict_partition_sum_check, symmetrization_identity_check};
pub use master::{master_equation_prob, master_equation_solve, MasterSolution, LEAK_LIMIT};
