//! Small dense complex linear algebra: LU determinants for Nystrom
//! matrices (sizes <= a few hundred).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major square complex matrix.
#[derive(Debug, Clone)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Determinant via in-place LU with partial pivoting.
    pub fn det_lu(mut self) -> Result<Complex64> {
        let n = self.n;
        if self.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Precondition("non-finite matrix entry".into()));
        }
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            // pivot row with largest modulus in this column
            let mut pivot = col;
            let mut best = self.get(col, col).norm_sqr();
            for row in col + 1..n {
                let m = self.get(row, col).norm_sqr();
                if m > best {
                    best = m;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if pivot != col {
                for j in 0..n {
                    self.data.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let diag = self.get(col, col);
            det *= diag;
            for row in col + 1..n {
                let factor = self.get(row, col) / diag;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in col + 1..n {
                    let v = self.get(row, j) - factor * self.get(col, j);
                    self.set(row, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// `det(I - lambda * A)` without mutating `A`.
pub fn det_id_minus(lambda: Complex64, a: &CMatrix) -> Result<Complex64> {
    let n = a.dim();
    CMatrix::from_fn(n, |i, j| {
        let id = if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        id - lambda * a.get(i, j)
    })
    .det_lu()
}

/// Upper-Hessenberg reduction `H = Q* A Q` by Householder reflections.
/// `det(I - lambda A) = det(I - lambda H)`, so reducing once and
/// calling [`det_id_minus_hessenberg`] per `lambda` turns a contour of
/// determinant evaluations from `O(n^3)` each into `O(n^2)` each.
pub fn hessenberg(a: &CMatrix) -> Result<CMatrix> {
    let n = a.dim();
    if a.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Precondition("non-finite matrix entry".into()));
    }
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating column k below row k+1
        let mut sigma = 0.0f64;
        for i in k + 1..n {
            sigma += h.get(i, k).norm_sqr();
        }
        if sigma == 0.0 {
            continue;
        }
        let x0 = h.get(k + 1, k);
        let alpha = if x0.norm() == 0.0 {
            Complex64::new(-sigma.sqrt(), 0.0)
        } else {
            -x0 / x0.norm() * sigma.sqrt()
        };
        let mut v: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = h.get(i, k);
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // H <- (I - beta v v*) H
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                dot += v[i].conj() * h.get(i, j);
            }
            let scaled = beta * dot;
            for i in k + 1..n {
                let val = h.get(i, j) - scaled * v[i];
                h.set(i, j, val);
            }
        }
        // H <- H (I - beta v v*)
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                dot += h.get(i, j) * v[j];
            }
            let scaled = beta * dot;
            for j in k + 1..n {
                let val = h.get(i, j) - scaled * v[j].conj();
                h.set(i, j, val);
            }
        }
        // clean the annihilated entries
        h.set(k + 1, k, alpha);
        for i in k + 2..n {
            h.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
    Ok(h)
}

/// `det(I - lambda H)` for upper-Hessenberg `H` in `O(n^2)` by
/// Gaussian elimination with row-pair pivoting along the subdiagonal.
pub fn det_id_minus_hessenberg(lambda: Complex64, h: &CMatrix) -> Result<Complex64> {
    let n = h.dim();
    let mut b = CMatrix::from_fn(n, |i, j| {
        let id = if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        id - lambda * h.get(i, j)
    });
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        if k + 1 < n && b.get(k + 1, k).norm_sqr() > b.get(k, k).norm_sqr() {
            for j in k..n {
                let tmp = b.get(k, j);
                b.set(k, j, b.get(k + 1, j));
                b.set(k + 1, j, tmp);
            }
            det = -det;
        }
        let diag = b.get(k, k);
        if diag.norm_sqr() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        det *= diag;
        if k + 1 < n {
            let factor = b.get(k + 1, k) / diag;
            if factor.norm_sqr() != 0.0 {
                for j in k + 1..n {
                    let val = b.get(k + 1, j) - factor * b.get(k, j);
                    b.set(k + 1, j, val);
                }
            }
        }
    }
    if !det.re.is_finite() || !det.im.is_finite() {
        return Err(Error::Precondition("non-finite determinant".into()));
    }
    Ok(det)
}

/// Determinant of a small dense matrix given as nested closure values,
/// used by the Fredholm series brute-force oracle (k <= 3).
pub fn det_small(n: usize, entry: impl Fn(usize, usize) -> Complex64) -> Complex64 {
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => entry(0, 0),
        2 => entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0),
        3 => {
            let e = |i, j| entry(i, j);
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
        _ => CMatrix::from_fn(n, |i, j| entry(i, j)).det_lu().expect("finite"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_determinant_is_one() {
        let a = CMatrix::from_fn(5, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let d = a.det_lu().unwrap();
        assert_relative_eq!(d.re, 1.0);
        assert_relative_eq!(d.im, 0.0);
    }

    #[test]
    fn two_by_two_complex() {
        let a = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 2.0),
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(3.0, 0.5),
            _ => c(-2.0, 1.0),
        });
        let d = a.clone().det_lu().unwrap();
        let expect = c(1.0, 2.0) * c(-2.0, 1.0) - c(0.0, -1.0) * c(3.0, 0.5);
        assert_relative_eq!(d.re, expect.re, max_relative = 1e-14);
        assert_relative_eq!(d.im, expect.im, max_relative = 1e-14);
    }

    #[test]
    fn singular_matrix_gives_zero() {
        let a = CMatrix::from_fn(3, |i, _| c(i as f64 + 1.0, 0.0));
        let d = a.det_lu().unwrap();
        assert_relative_eq!(d.norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn det_id_minus_zero_lambda_is_one() {
        let a = CMatrix::from_fn(4, |i, j| c((i * j) as f64, 0.3));
        let d = det_id_minus(c(0.0, 0.0), &a).unwrap();
        assert_relative_eq!(d.re, 1.0);
        assert_relative_eq!(d.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_non_finite_entries() {
        let a = CMatrix::from_fn(2, |_, _| c(f64::NAN, 0.0));
        assert!(a.det_lu().is_err());
    }

    #[test]
    fn hessenberg_preserves_det_id_minus() {
        // deterministic pseudo-random entries
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 24;
        let a = CMatrix::from_fn(n, |_, _| c(next(), next()));
        let h = hessenberg(&a).unwrap();
        for i in 0..n {
            for j in 0..i.saturating_sub(1) {
                assert!(h.get(i, j).norm() < 1e-13, "entry ({i},{j}) not annihilated");
            }
        }
        for lam in [c(0.0, 0.0), c(0.3, -0.2), c(-1.1, 0.7), c(2.0, 2.0)] {
            let full = det_id_minus(lam, &a).unwrap();
            let fast = det_id_minus_hessenberg(lam, &h).unwrap();
            assert!(
                (full - fast).norm() <= 1e-10 * full.norm().max(1.0),
                "lambda {lam}: {full} vs {fast}"
            );
        }
    }

    #[test]
    fn det_small_matches_lu() {
        let entries = [
            [c(1.0, 0.1), c(0.2, -0.3), c(0.0, 1.0)],
            [c(0.5, 0.5), c(2.0, 0.0), c(-1.0, 0.2)],
            [c(0.1, -0.1), c(0.3, 0.3), c(1.5, -0.5)],
        ];
        let d3 = det_small(3, |i, j| entries[i][j]);
        let lu = CMatrix::from_fn(3, |i, j| entries[i][j]).det_lu().unwrap();
        assert_relative_eq!((d3 - lu).norm(), 0.0, epsilon = 1e-13);
    }
}
