//! Acceptance gate: ten end-to-end criteria, one test (and one
//! pass/fail line) each, at the tolerances the library promises.
//!
//! The criteria chain every layer against an independent oracle:
//! q-combinatorics against closed forms, the contour formula and the
//! master equation against the Skellam law and each other, the
//! Nystrom determinants against product/contour identities, the two
//! Fredholm representations against each other and against Monte
//! Carlo, the F2/Airy engine against self-convergence and the Airy
//! ODE, and the scaling experiment against 1 - F2(-s).

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use madm::asympt::{airy_ai, f2, linspace, tw_experiment};
use madm::exact::{contour_prob_finite, master_equation_prob};
use madm::fredholm::{
    identity_prop13, identity_prop14, prob_one_param, prob_two_param, KernelParams, OneParamQuad,
    TwoParamQuad,
};
use madm::params::{gaussian_binomial, q_bracket, uv_bracket, uv_bracket_binomial, StackSize};
use madm::sim::{empirical_cdf, SimConfig};
use madm::skellam::Skellam;
use madm::{ModelParams, QueryPoint};

/// Cross-formula values shared between criteria 6 and 8:
/// (m, x, two-param prob, one-param prob) at tau = 0.6, t = 2.
fn cross_formula_values() -> &'static Vec<(u32, i64, f64, f64)> {
    static VALUES: OnceLock<Vec<(u32, i64, f64, f64)>> = OnceLock::new();
    VALUES.get_or_init(|| {
        let params = ModelParams::one_param_from_tau(0.6).unwrap();
        let mut out = Vec::new();
        for m in 1..=3u32 {
            for x in -3..=5i64 {
                let qp = QueryPoint::new(m, 2.0, x).unwrap();
                let two = prob_two_param(&qp, &params, &TwoParamQuad::default())
                    .unwrap()
                    .prob;
                let one = prob_one_param(&qp, &params, &OneParamQuad::default())
                    .unwrap()
                    .prob;
                out.push((m, x, two, one));
            }
        }
        out
    })
}

/// One-parameter formula values shared between criteria 7 and 8:
/// (x, prob) at tau = 0.5, m = 2, t = 2.
fn formula_vs_mc_values() -> &'static Vec<(i64, f64)> {
    static VALUES: OnceLock<Vec<(i64, f64)>> = OnceLock::new();
    VALUES.get_or_init(|| {
        let params = ModelParams::one_param_from_tau(0.5).unwrap();
        (-3..=5i64)
            .map(|x| {
                let qp = QueryPoint::new(2, 2.0, x).unwrap();
                let prob = prob_one_param(&qp, &params, &OneParamQuad::default())
                    .unwrap()
                    .prob;
                (x, prob)
            })
            .collect()
    })
}

fn report(criterion: u32, pass: bool, detail: &str) {
    // Write through the raw stdout handle so the line is visible even for
    // passing tests (the harness only captures the print! macros).
    use std::io::Write;
    writeln!(
        std::io::stdout(),
        "criterion {criterion:2}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    )
    .ok();
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_q_combinatorics_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let u: f64 = rng.gen_range(0.51..0.99);
        let params = ModelParams::one_param(u).unwrap();
        let tau = params.tau();
        let n: u32 = rng.gen_range(1..=20);
        let m: u32 = rng.gen_range(0..=n);
        // [N] = u^{N-1} [N]_tau
        let lhs = uv_bracket(n, params.u(), params.v());
        let rhs = u.powi(n as i32 - 1) * q_bracket(StackSize::Finite(n), tau).unwrap();
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
        // {N brack m} = u^{m(N-m)} {N brack m}_tau
        let lhs = uv_bracket_binomial(n, m, &params).unwrap();
        let rhs = u.powi((m * (n - m)) as i32) * gaussian_binomial(n, m, tau).unwrap();
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
        // q-Pascal
        if n >= 2 && m >= 1 && m < n {
            let lhs = gaussian_binomial(n, m, tau).unwrap();
            let rhs = gaussian_binomial(n - 1, m - 1, tau).unwrap()
                + tau.powi(m as i32) * gaussian_binomial(n - 1, m, tau).unwrap();
            worst = worst.max((lhs - rhs).abs() / lhs.abs());
        }
    }
    report(
        1,
        worst < 1e-12,
        &format!("worst relative deviation {worst:.3e} over 200 draws (tol 1e-12)"),
    );
}

#[test]
fn criterion_02_skellam_anchor_single_particle() {
    let params = ModelParams::new(2.0 / 3.0, 0.6).unwrap(); // tau = 0.5
    let t = 1.0;
    let oracle = Skellam::new(params.p() * t, params.q() * t);
    let mut worst_contour = 0.0f64;
    let mut worst_master = 0.0f64;
    for x in -3..=3 {
        let c = contour_prob_finite(&[0], 1, x, t, &params, 128).unwrap();
        worst_contour = worst_contour.max((c.prob - oracle.cdf(x)).abs());
        let m = master_equation_prob(&[0], 1, x, t, &params, (-26, 26)).unwrap();
        worst_master = worst_master.max((m - oracle.cdf(x)).abs());
    }
    let init = madm::Configuration::from_positions(&[0]).unwrap();
    let cfg = SimConfig::finite(params, init, t, 100_000, 17).unwrap();
    let grid: Vec<i64> = (-3..=3).collect();
    let cdf = empirical_cdf(&cfg, 1, &grid).unwrap();
    let mut worst_mc_bands = 0.0f64;
    for (i, &x) in grid.iter().enumerate() {
        let band = (3.0 * cdf.stderr[i]).max(1e-12);
        worst_mc_bands = worst_mc_bands.max((cdf.values[i] - oracle.cdf(x)).abs() / band);
    }
    report(
        2,
        worst_contour < 1e-8 && worst_master < 1e-9 && worst_mc_bands < 1.0,
        &format!(
            "contour {worst_contour:.3e} (tol 1e-8), master {worst_master:.3e} (tol 1e-9), \
             MC {worst_mc_bands:.2} of 3 stderr at 1e5 replicas"
        ),
    );
}

#[test]
fn criterion_03_contour_vs_master_small_systems() {
    let params = ModelParams::new(0.6, 0.6).unwrap();
    let t = 0.5;
    let mut worst = 0.0f64;
    for y in [&[0i64, 0][..], &[0, 0, 0][..]] {
        for m in 1..=2u32 {
            for x in -4..=4 {
                let c = contour_prob_finite(y, m, x, t, &params, 256).unwrap();
                let me = master_equation_prob(y, m, x, t, &params, (-20, 20)).unwrap();
                worst = worst.max((c.prob - me).abs());
            }
        }
    }
    report(
        3,
        worst < 1e-6,
        &format!("worst |contour - master| {worst:.3e} over N in {{2,3}} (tol 1e-6)"),
    );
}

fn random_lambda(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, theta)
}

#[test]
fn criterion_04_product_identity_for_k1() {
    let params = ModelParams::one_param_from_tau(0.5).unwrap();
    let kp = KernelParams::new(2, 1.0, 1, params);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let lambda = random_lambda(&mut rng);
        let eval = identity_prop14(&kp, lambda, 64).unwrap();
        worst = worst.max(eval.deviation);
    }
    report(
        4,
        worst < 1e-8,
        &format!("worst |det(I - lambda K1) - product| {worst:.3e} at M = 64 (tol 1e-8)"),
    );
}

#[test]
fn criterion_05_contour_equivalence_identity() {
    let params = ModelParams::one_param_from_tau(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x: i64 = rng.gen_range(-2..=3);
        let t: f64 = rng.gen_range(0.2..2.0);
        let lambda = random_lambda(&mut rng);
        let kp = KernelParams::new(x, t, 1, params);
        let eval = identity_prop13(&kp, lambda, 320).unwrap();
        worst = worst.max(eval.deviation);
    }
    report(
        5,
        worst < 1e-8,
        &format!("worst contour-equivalence deviation {worst:.3e} over 10 draws (tol 1e-8)"),
    );
}

#[test]
fn criterion_06_two_param_equals_one_param() {
    let mut worst = 0.0f64;
    for &(m, x, two, one) in cross_formula_values() {
        let dev = (two - one).abs();
        if dev > worst {
            worst = dev;
        }
        assert!(dev < 1e-6, "m = {m}, x = {x}: two-param {two} vs one-param {one}");
    }
    report(
        6,
        worst < 1e-6,
        &format!("worst cross-formula deviation {worst:.3e} over 27 points (tol 1e-6)"),
    );
}

#[test]
fn criterion_07_formula_vs_simulation() {
    let params = ModelParams::one_param_from_tau(0.5).unwrap();
    let t_formula = 2.0;
    let cfg = SimConfig::step(params, t_formula / params.gamma(), 100_000, 23, 40).unwrap();
    let values = formula_vs_mc_values();
    let grid: Vec<i64> = values.iter().map(|&(x, _)| x).collect();
    let cdf = empirical_cdf(&cfg, 2, &grid).unwrap();
    let mut worst_bands = 0.0f64;
    for (i, &(x, prob)) in values.iter().enumerate() {
        let band = (3.0 * cdf.stderr[i]).max(1e-12);
        let bands = (prob - cdf.values[i]).abs() / band;
        worst_bands = worst_bands.max(bands);
        assert!(
            bands < 1.0,
            "x = {x}: formula {prob} vs MC {} +- {}",
            cdf.values[i],
            cdf.stderr[i]
        );
    }
    report(
        7,
        worst_bands < 1.0,
        &format!("worst formula-vs-MC gap {worst_bands:.2} of 3 stderr at 1e5 replicas"),
    );
}

#[test]
fn criterion_08_nystrom_doubling_stability() {
    // M is the Nystrom matrix dimension: the Gamma-contour node count
    // for the identity determinants, the xi node count for the
    // two-parameter formula, and the eta node count for the
    // one-parameter formula.
    let mut worst = 0.0f64;

    // determinants of criteria 4 and 5 at doubled M
    let params5 = ModelParams::one_param_from_tau(0.5).unwrap();
    let kp = KernelParams::new(2, 1.0, 1, params5);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let lambda = random_lambda(&mut rng);
        let base = identity_prop14(&kp, lambda, 64).unwrap();
        let fine = identity_prop14(&kp, lambda, 128).unwrap();
        worst = worst.max((base.det_a - fine.det_a).norm());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let x: i64 = rng.gen_range(-2..=3);
        let t: f64 = rng.gen_range(0.2..2.0);
        let lambda = random_lambda(&mut rng);
        let kp = KernelParams::new(x, t, 1, params5);
        let base = identity_prop13(&kp, lambda, 320).unwrap();
        let fine = identity_prop13(&kp, lambda, 640).unwrap();
        worst = worst
            .max((base.det_a - fine.det_a).norm())
            .max((base.det_b - fine.det_b).norm());
    }

    // probability values of criterion 6 at doubled matrix dimension
    let params6 = ModelParams::one_param_from_tau(0.6).unwrap();
    let two_fine = TwoParamQuad {
        xi_nodes: 2 * TwoParamQuad::default().xi_nodes,
        ..TwoParamQuad::default()
    };
    let one_fine = OneParamQuad {
        eta_nodes: 2 * OneParamQuad::default().eta_nodes,
        ..OneParamQuad::default()
    };
    for &(m, x, two, one) in cross_formula_values() {
        let qp = QueryPoint::new(m, 2.0, x).unwrap();
        let two2 = prob_two_param(&qp, &params6, &two_fine).unwrap().prob;
        let one2 = prob_one_param(&qp, &params6, &one_fine).unwrap().prob;
        worst = worst.max((two - two2).abs()).max((one - one2).abs());
    }

    // probability values of criterion 7 at doubled matrix dimension
    for &(x, prob) in formula_vs_mc_values() {
        let qp = QueryPoint::new(2, 2.0, x).unwrap();
        let fine = prob_one_param(&qp, &params5, &one_fine).unwrap().prob;
        worst = worst.max((prob - fine).abs());
    }

    report(
        8,
        worst < 1e-8,
        &format!("worst change under doubling {worst:.3e} (tol 1e-8)"),
    );
}

#[test]
fn criterion_09_f2_and_airy_engine() {
    let mut worst_self = 0.0f64;
    let mut s = -5.0;
    while s <= 2.0 + 1e-9 {
        worst_self = worst_self.max((f2(s, 40).unwrap() - f2(s, 80).unwrap()).abs());
        s += 0.5;
    }
    let mut monotone = true;
    let mut prev = -1.0;
    for i in 0..=120 {
        let v = f2(-8.0 + 0.1 * i as f64, 80).unwrap();
        monotone &= v >= prev - 1e-12;
        prev = v;
    }
    let tail = f2(6.0, 80).unwrap();

    // Airy ODE residual via an 8th-order central second difference;
    // the step is larger on the right, where cancellation noise in the
    // series dominates truncation error
    let stencil = [
        -1.0 / 560.0,
        8.0 / 315.0,
        -1.0 / 5.0,
        8.0 / 5.0,
        -205.0 / 72.0,
        8.0 / 5.0,
        -1.0 / 5.0,
        8.0 / 315.0,
        -1.0 / 560.0,
    ];
    let mut worst_ode = 0.0f64;
    let mut x = -10.0;
    while x <= 10.0 + 1e-9 {
        let h = if x > 0.5 { 0.09 } else { 0.02 };
        let mut second = 0.0;
        for (k, c) in stencil.iter().enumerate() {
            second += c * airy_ai(x + (k as f64 - 4.0) * h).unwrap();
        }
        second /= h * h;
        worst_ode = worst_ode.max((second - x * airy_ai(x).unwrap()).abs());
        x += 0.5;
    }

    report(
        9,
        worst_self < 1e-10 && monotone && tail > 1.0 - 1e-8 && worst_ode < 1e-10,
        &format!(
            "self-convergence {worst_self:.3e} (tol 1e-10), monotone {monotone}, \
             F2(6) = {tail:.12}, ODE residual {worst_ode:.3e} (tol 1e-10)"
        ),
    );
}

#[test]
fn criterion_10_tracy_widom_rendering() {
    let params = ModelParams::one_param_from_tau(0.5).unwrap();
    let grid = linspace(-4.0, 4.0, 33);
    let coarse = tw_experiment(&params, 0.25, 50.0, 20_000, 101, &grid).unwrap();
    let fine = tw_experiment(&params, 0.25, 200.0, 20_000, 101, &grid).unwrap();
    report(
        10,
        fine.ks_distance < 0.1 && fine.ks_distance < coarse.ks_distance,
        &format!(
            "KS distance {:.4} at t = 200 (tol 0.1), {:.4} at t = 50 (must be larger)",
            fine.ks_distance, coarse.ks_distance
        ),
    );
}
