//! Long-time asymptotics: Airy functions, the Tracy-Widom GUE
//! distribution `F_2`, and the Monte Carlo scaling experiment that
//! compares the rescaled `m`-th particle position to `1 - F_2`.

mod airy;
mod f2;
mod tw;

pub use airy::{airy_ai, airy_ai_pair, airy_ai_prime, airy_kernel, AIRY_AT_ZERO, AIRY_PRIME_AT_ZERO};
pub use f2::{f2, F2_DEFAULT_ORDER, F2_S_MAX, F2_S_MIN};
pub use tw::{
    corrected_scaling_constants, linspace, scaling_constants, tw_experiment, ScalingConstants,
    TwComparison,
};
