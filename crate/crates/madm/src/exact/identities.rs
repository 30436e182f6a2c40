//! Brute-force checks of the two series identities used to collapse the
//! subset sum into a Fredholm determinant: the strict-partition geometric
//! sum and the symmetrization identity.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Brute-force `sum over strict k-subsets of {1..n_cap} of tau^{z_1+...+z_k}`
/// versus the closed form `tau^{k(k+1)/2} / prod_{i=1}^k (1 - tau^i)`.
///
/// Returns `(lhs, rhs)`.
pub fn strict_partition_sum_check(k: u32, tau: f64, n_cap: u32) -> Result<(f64, f64)> {
    if k == 0 || k > 6 {
        return Err(Error::Precondition(format!("k must lie in 1..=6, got {k}")));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Precondition(format!("tau must lie in (0,1), got {tau}")));
    }
    let mut lhs = 0.0;
    brute_force_subsets(k, 1, n_cap, 0, tau, &mut lhs);
    let mut rhs = tau.powi((k * (k + 1) / 2) as i32);
    for i in 1..=k {
        rhs /= 1.0 - tau.powi(i as i32);
    }
    Ok((lhs, rhs))
}

fn brute_force_subsets(remaining: u32, min: u32, max: u32, partial: i64, tau: f64, acc: &mut f64) {
    if remaining == 0 {
        *acc += tau.powi(partial as i32);
        return;
    }
    for z in min..=max.saturating_sub(remaining - 1) {
        brute_force_subsets(remaining - 1, z + 1, max, partial + z as i64, tau, acc);
    }
}

/// Evaluate the symmetrized sum
/// `sum_{sigma in S_k} prod_{i<j} (u + v xi_{s(i)} xi_{s(j)} - xi_{s(i)}) / (xi_{s(j)} - xi_{s(i)})`
/// at random complex points and return the maximum deviation from
/// `u^{k(k-1)/2} prod_{i=1}^k (1 - tau^i)/(1 - tau)`.
pub fn symmetrization_identity_check(
    k: u32,
    params: &ModelParams,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if k == 0 || k > 5 {
        return Err(Error::Precondition(format!("k must lie in 1..=5, got {k}")));
    }
    let u = params.u();
    let v = params.v();
    let tau = params.tau();
    let mut rhs = Complex64::new(u.powi((k * (k - 1) / 2) as i32), 0.0);
    for i in 1..=k {
        rhs *= (1.0 - tau.powi(i as i32)) / (1.0 - tau);
    }

    let perms = permutations(k as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev = 0.0f64;
    for _ in 0..samples {
        let points = sample_points(k as usize, &mut rng, u, v);
        let mut lhs = Complex64::new(0.0, 0.0);
        for perm in &perms {
            let mut term = Complex64::new(1.0, 0.0);
            for i in 0..k as usize {
                for j in i + 1..k as usize {
                    let a = points[perm[i]];
                    let b = points[perm[j]];
                    term *= (u + v * a * b - a) / (b - a);
                }
            }
            lhs += term;
        }
        max_dev = max_dev.max((lhs - rhs).norm());
    }
    Ok(max_dev)
}

/// Pairwise-distinct random points on an annulus, resampled while any
/// pair is degenerate or a denominator is near zero.
fn sample_points(k: usize, rng: &mut ChaCha8Rng, u: f64, v: f64) -> Vec<Complex64> {
    'outer: loop {
        let points: Vec<Complex64> = (0..k)
            .map(|_| {
                let r = 0.7 + 0.6 * rng.gen::<f64>();
                let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                Complex64::from_polar(r, theta)
            })
            .collect();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                if (points[i] - points[j]).norm() < 1e-6 {
                    continue 'outer;
                }
                if (u + v * points[i] * points[j] - points[i]).norm() < 1e-6 {
                    continue 'outer;
                }
            }
        }
        return points;
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    heap_permute(k, &mut current, &mut out);
    out
}

fn heap_permute(n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n <= 1 {
        out.push(current.clone());
        return;
    }
    for i in 0..n {
        heap_permute(n - 1, current, out);
        if n % 2 == 0 {
            current.swap(i, n - 1);
        } else {
            current.swap(0, n - 1);
        }
    }
}
