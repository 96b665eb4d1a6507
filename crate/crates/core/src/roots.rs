// SPDX-License-Identifier: Apache-2.0

//! Sign-change scanning with bisection refinement.

use std::f64::consts::PI;

use crate::tol::ROOT_TOL;

/// Bisects a bracketing interval `[lo, hi]` with `f(lo)·f(hi) < 0` down to
/// width `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `f` on `[lo, hi)` located by a uniform scan of `samples`
/// intervals and refined by bisection. Sampled exact zeros are reported as
/// they are.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let step = (hi - lo) / samples as f64;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for k in 1..=samples {
        let b = if k == samples {
            hi
        } else {
            lo + step * k as f64
        };
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(&f, a, b, ROOT_TOL));
        }
        a = b;
        fa = fb;
    }
    roots
}

/// Roots of a `2π`-periodic function on `[-π, π)`, sorted.
pub fn periodic_roots<F: Fn(f64) -> f64>(f: F, samples: usize) -> Vec<f64> {
    let mut roots: Vec<f64> = scan_roots(f, -PI, PI, samples)
        .into_iter()
        .map(|r| if r >= PI { r - 2.0 * PI } else { r })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= ROOT_TOL);
    roots
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn finds_sine_roots() {
        let roots = periodic_roots(|t| (t - 0.3).sin(), 4096);
        assert_eq!(roots.len(), 2);
        assert_abs_diff_eq!(roots[0], 0.3 - PI, epsilon = 1e-11);
        assert_abs_diff_eq!(roots[1], 0.3, epsilon = 1e-11);
    }

    #[test]
    fn triple_frequency() {
        let roots = periodic_roots(|t| (3.0 * t + 0.1).cos(), 4096);
        assert_eq!(roots.len(), 6);
        for r in roots {
            assert!((3.0 * r + 0.1).cos().abs() < 1e-10);
        }
    }

    #[test]
    fn no_roots() {
        assert!(periodic_roots(|t| 2.0 + t.sin(), 1024).is_empty());
    }

    #[test]
    fn bisect_precision() {
        let r = bisect(|x| x * x - 2.0, 1.0, 2.0, 1e-13);
        assert_abs_diff_eq!(r, 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn wrap() {
        assert_abs_diff_eq!(wrap_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_angle(PI), -PI);
        assert_abs_diff_eq!(wrap_angle(0.2), 0.2);
    }
}
