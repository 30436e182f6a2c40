//! Result containers with reproducibility metadata, shared by the CLI and the
//! cross-validation harness.

use serde::{Deserialize, Serialize};

use crate::params::ModelParams;

/// One evaluated probability row: `P(x_m <= x)` with an error estimate
/// (quadrature residual or Monte Carlo standard error).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbabilityRow {
    pub x: i64,
    pub prob: f64,
    pub err: f64,
}

/// Per-x probability values plus all inputs needed to replay the
/// computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionResult {
    pub rows: Vec<ProbabilityRow>,
    pub params: ModelParams,
    pub m: u32,
    pub t_formula: f64,
    /// Method label ("two-param", "one-param", "contour", "master", "mc").
    pub method: String,
    pub seed: Option<u64>,
    pub node_counts: Vec<usize>,
    /// Truncation depths actually used (series, products), in order of use.
    pub truncation_depths: Vec<usize>,
}
