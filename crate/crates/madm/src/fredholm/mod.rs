//! Nystrom evaluation of the Fredholm determinant representations of
//! `P(x_m(t/gamma) <= x)`: the two-parameter lambda-contour formula,
//! the one-parameter mu-contour formula, and the kernel identities
//! relating them.

mod identities;
mod kernel;
mod one_param;
mod two_param;

pub use identities::{
    default_gamma_radius, identity_prop13, identity_prop14, kernel_k1, kernel_k2, kernel_row, phi,
    phi_infinity, phi_n, product_depth, IdentityEval,
};
pub use kernel::{
    epsilon, fredholm_series_det, kernel_k, nystrom_det, nystrom_matrix, KernelParams,
    MIN_DENOMINATOR, TAIL_TARGET,
};
pub use one_param::{
    default_eta_radius, default_mu_radius, default_zeta_radius, f_sum, f_sum_with_depth,
    f_truncation, j_matrix, kernel_j, lambda_weight, prob_one_param, prob_one_param_with_tail, OneParamQuad,
};
pub use two_param::{
    default_xi_radius, lambda_radius, prob_two_param, prob_two_param_with_tail, ProbEval, TwoParamQuad, IMAG_RESIDUAL_LIMIT,
};
